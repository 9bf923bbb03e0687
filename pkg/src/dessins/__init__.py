"""Exact combinatorics of stable labelled trees and a derived quantum
statistical system: graphs and grafting, genus-zero boundary strata, the
Connes-Kreimer Hopf algebra of labelled rooted trees, cyclotomic Galois
actions, and crossed-product representations with partition/Gibbs data.
"""

from dessins import graphs, operads, strata, hopf, galois, qsm

__all__ = ["graphs", "operads", "strata", "hopf", "galois", "qsm"]
__version__ = "0.1.0"
