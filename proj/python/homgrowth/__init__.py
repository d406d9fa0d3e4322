"""Exact homology of finite Salvetti covers and Davis complexes.

Thin wrapper over the C++ core; see the project README for the model and
the command line interface.
"""

from ._core import (  # noqa: F401
    BudgetError,
    Complex,
    InconsistencyError,
    RankOptions,
    barycentric_subdivision,
    build,
    builtin,
    builtin_catalog,
    collapse_report,
    cover_betti,
    cover_scan,
    davis_betti,
    dumps,
    embedding_criterion,
    full_subcomplex,
    is_flag,
    join,
    link,
    loads,
    mv_check,
    octahedralize,
    reduced_betti,
    smith_normal_form,
    star,
    subdivide_edge,
    torsion_profile,
)

__all__ = [
    "BudgetError",
    "Complex",
    "InconsistencyError",
    "RankOptions",
    "barycentric_subdivision",
    "build",
    "builtin",
    "builtin_catalog",
    "collapse_report",
    "cover_betti",
    "cover_scan",
    "davis_betti",
    "dumps",
    "embedding_criterion",
    "full_subcomplex",
    "is_flag",
    "join",
    "link",
    "loads",
    "mv_check",
    "octahedralize",
    "reduced_betti",
    "smith_normal_form",
    "star",
    "subdivide_edge",
    "torsion_profile",
]

__version__ = "0.1.0"
