"""Construction of constant-mean-curvature-1 surfaces in hyperbolic
3-space from Weierstrass data: null-curve integration in SL(2,C),
reflection representations, the SU(2) period problem, symmetric genus-0
existence ranges, and mesh assembly.
"""
from .algebra import (INF, BallPoint, HermitianPoint, act_on_point, adj2,
                      det2, frobenius, from_ball, hyperbolic_distance, inv2,
                      is_hermitian_positive, is_sl2c, is_su2, mat,
                      mobius_apply, random_su2, su2_log_axis, to_ball)
from .errors import (AccuracyError, BranchError, CatalogError, CmcForgeError,
                     ConvergenceError, DataError, InvalidMatrixError,
                     NoAxisError, NormalizationError, PathError,
                     SingularPointError, WrongSheetError)
from .genus0 import (JmIntervals, Table1Row, alpha_of_c, c_range, ends_count,
                     exists_cmc, format_table1, jm_intervals, lambda_of_c,
                     sigma_triple, table1_json, table1_rows, theta_of_c,
                     total_abs_curvature)
from .nullcurve import (GaussJet, NullCurveSolution, deform_in_c, dualize,
                        hyperbolic_gauss, integrate, monodromy,
                        monodromy_c_derivative, reflection_matrix,
                        secondary_gauss, secondary_schwarzian)
from .paths import (PolyPath, check_clearance, circle_path, contour_integral,
                    loop_around)
from .periodkill import (CommutantClass, FamilySpec, ReflectionRep,
                         SolveResult, UnitarizeResult, classify_commutant,
                         compute_rep, is_reducible, mirror_form, noid_family,
                         rho_from_word, solve_lambda, step1_check,
                         step2_diagonalize, step3_scale, su2_residual,
                         synthetic_family, unitarize)
from .rational import AnalyticMap, Poly, RationalMap, poly_from_roots, schwarzian
from .surface import (GridSpec, SurfaceMesh, build_fundamental_mesh,
                      default_grid, export_json, export_obj, import_obj,
                      minimal_mesh_points, numeric_ta, reflect_orbit,
                      resolve_gauge)
from .wdata import (AlphaEntries, Reflection, RegularityReport,
                    WeierstrassData, catalog, check_regular, data_from_json,
                    data_to_json, euclid_period, metric_dsG, metric_dsigma,
                    minimal_immerse, sigma_from_normal, su2_equivalent)

__version__ = "0.1.0"
