"""Seeding strategies for k-means and Gaussian mixture fitting.

Multipass zig-zag seed reselection, lookahead candidate ranking (phi_COM /
log-likelihood), Gaussian-distance D2 sampling, plus Lloyd, EM and the
synthetic dataset generators backing the benchmark CLI.
"""

from seedkit._core import *  # noqa: F401,F403
from seedkit._core import __version__  # noqa: F401
