"""Sign patterns of row orthogonal matrices and the strong inner product property.

The package decides the SIPP with exact certificates, builds the tangent and
normal verification matrices, constructs sparse orthogonal families
(Hessenberg, hollow, corner merges, Cayley transforms), realizes certified
super patterns numerically, and catalogs small sign patterns.
"""

from .errors import (AtlasFormatError, DimensionCapError, FormatError,
                     HollowOrderError, NotHollowError, NotOrthogonalError,
                     ObstructionError, RankDeficiencyError, ShapeError,
                     SingularMatrixError, SippError, StructureError,
                     TargetPatternError)
from .linalg import (DEFAULT_TOL, Mat, block, determinant, direct_sum,
                     hadamard, inverse, left_nullspace, nullspace, rank,
                     read_matrix, rref, solve, vec, vec_restrict, write_matrix)
from .signpat import (SignPattern, SignedPerm, apply_signed_perms,
                      canonical_form, is_super_pattern, potentially_orthogonal,
                      sign_equivalent, sign_of, super_pattern)
from .sipp_core import (HollowSignatureCertificate, RemoveRowReport,
                        SippCertificate, Verdict, check_remove_row, has_sipp,
                        has_sipp_square_via_inverse, hollow_sipp_by_signature,
                        quick_rejects)
from .verification import (AddVertexResult, LabeledMatrix, LiberationResult,
                           Obstruction, TangentDirection, add_vertex_check,
                           liberate, liberation_obstructions,
                           normal_space_matrix, normal_verification_matrix,
                           orthogonal_completion, sipp_by_verification,
                           tangent_space_matrix, tangent_verification_matrix,
                           waters_block_check)
from .constructions import (GivensSpec, bordered_block, block_lower_triangular,
                            cayley, givens, hessenberg_orthogonal,
                            hollow_orthogonal, merge_hollow,
                            merge_row_orthogonal, pad_columns, post_apply,
                            pre_apply)
from .realize import (RealizationResult, orthogonality_residual,
                      realize_superpattern, realize_via_cayley,
                      retract_row_orthogonal, solve_tangent_direction)
from .catalog import (Classification, build_atlas, audit_atlas, classify,
                      enumerate_patterns, load_atlas, save_atlas)

__version__ = "0.1.0"
