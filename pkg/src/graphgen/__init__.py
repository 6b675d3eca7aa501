"""Column generation and graph generation for the CVRP LP relaxation."""

from .column import Column, Route, make_route, reduced_cost
from .driver import SolveParams, SolveResult, run_benchmark, solve, solve_cg, solve_gg
from .family import Ordering, build_graph, build_ordering, decompose_flow
from .instance import CvrpInstance, generate, load, save
from .lp import LpProblem, LpSolution, solve as solve_lp
from .master import RmpModel, build_cg_rmp, build_gg_rmp, extract_duals
from .pricing import price

__all__ = [
    "Column", "Route", "make_route", "reduced_cost",
    "SolveParams", "SolveResult", "run_benchmark", "solve", "solve_cg", "solve_gg",
    "Ordering", "build_graph", "build_ordering", "decompose_flow",
    "CvrpInstance", "generate", "load", "save",
    "LpProblem", "LpSolution", "solve_lp",
    "RmpModel", "build_cg_rmp", "build_gg_rmp", "extract_duals",
    "price",
]
