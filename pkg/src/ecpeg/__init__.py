"""LDPC code construction and sampling-security analysis.

Builds Tanner graphs with progressive edge growth (plain and
entropy-constrained), measures how short cycles and stopping sets are
distributed over variable nodes, and estimates the failure probability
of randomized data-availability sampling against adversarial erasures.
"""

from ecpeg.tanner import TannerGraph, girth, avoids_short_cycles, read_alist, write_alist
from ecpeg.peg import build_peg
from ecpeg.ecpeg import build_ecpeg

__version__ = "0.1.0"

__all__ = [
    "TannerGraph",
    "girth",
    "avoids_short_cycles",
    "read_alist",
    "write_alist",
    "build_peg",
    "build_ecpeg",
    "__version__",
]
