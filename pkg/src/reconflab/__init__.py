"""Exact solvers and oracle-verified gadget reductions for dominating-set
reconfiguration and head-on-tape reachability."""

__version__ = "0.1.0"
