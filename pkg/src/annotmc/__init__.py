"""Annotated graph parameters, a CMSO-with-restricted-quantification
evaluator, boundaried-graph folios, and unbreakable tree decompositions,
exact at desk scale."""

from .errors import (AnnotmcError, CompatibilityError, EnvelopeError,
                     FormatError, PreconditionError, ScopeError, SemanticError)
from .graphs import (AnnotatedGraph, BoundariedGraph, Graph, Separation,
                     clique, cycle, enumerate_separations, generate, grid,
                     is_unbreakable, leaf_augment, outer_grid, parse_graph,
                     path, print_graph, rainbow_grid, solve_conn, solve_dp,
                     star, subdivide, twisted_grid_g, twisted_grid_h)
from .minors import (MinorModel, TopoModel, dissolve, find_annotated_minor,
                     find_annotated_topological_minor)
from .params import ParamResult, compute, torso, treewidth, validate_result
from .decomp import (TreeDecomposition, extract_cone, find_decomposition,
                     is_regular, is_strongly_unbreakable, node_anatomy,
                     parse_decomp, print_decomp, validate)
from .logic import (Ranks, formula_length, fragment_of, parse_battery,
                    parse_formula, ranks, to_prenex, to_text)
from .evaluator import (battery_type, enumerate_bounded_sets, evaluate,
                        evaluate_witness, ext_battery_type)
from .folio import (Folio, compatible, ext_folio, find_representative, folio,
                    glue)
from .rewrite import (ReductionOutput, collapse_rewrite, hardness_reduce,
                      minor_formula)
from .lab import (MiniDpReport, OracleMismatch, check_composition,
                  check_cone_unbreakability_bound, check_param_transfer,
                  check_bounded_witness_size, check_tm_preserved, mini_dp,
                  param_transfer_sweep, replace_cone)

__version__ = "0.1.0"
