"""Hole-free point sets in R^d built from base-2 digital nets.

Pipeline: generate a net or almost net (:mod:`holefree.netgen`), turn it into
a good set of bitstring tuples (:mod:`holefree.goodset`), embed it at widely
separated integer scales (:mod:`holefree.embed`), and certify the result with
exact hole oracles (:mod:`holefree.holes`, :mod:`holefree.geom`).
"""

__version__ = "0.1.0"
