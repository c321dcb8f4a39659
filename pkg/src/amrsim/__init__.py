"""AMR graph similarity metrics and structured sentence-embedding decomposition."""

from amrsim.aspects import ASPECT_NAMES, Aspect, MetricConfig, metric_vector
from amrsim.graph import (
    AmrGraph,
    PenmanError,
    Triple,
    TripleSet,
    extract_triples,
    node_degrees,
    parse_penman,
    read_penman_file,
    serialize_penman,
    write_penman_file,
)
from amrsim.smatch import smatch
from amrsim.wlkernel import wlk, wwlk
from amrsim.wordvec import WordVectorTable, label_similarity, load_vectors

__version__ = "0.1.0"
