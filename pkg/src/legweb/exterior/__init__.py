"""Exterior algebra over the coframe (w1, w2, th, rho0) with polynomial coefficients."""
from .forms import (
    COFRAME,
    RHO0,
    TH,
    W1,
    W2,
    Form,
    MatrixForm,
    extract,
    mask_of,
    matrix_wedge,
    monomial_text,
    parse_monomial,
    rho0,
    th,
    w1,
    w2,
    w3,
    wedge,
)
from .table import (
    CoframeSolveError,
    DerivationTable,
    d,
    ddzero_residual,
    deformation_defect,
    mc_defect,
    solve_coframe,
)

__all__ = [
    "COFRAME", "RHO0", "TH", "W1", "W2", "CoframeSolveError", "DerivationTable", "Form",
    "MatrixForm", "d", "ddzero_residual", "deformation_defect", "extract", "mask_of",
    "matrix_wedge", "mc_defect", "monomial_text", "parse_monomial", "rho0", "solve_coframe",
    "th", "w1", "w2", "w3", "wedge",
]
