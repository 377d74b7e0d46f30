"""Matrix models of the web's structure equations and their checks."""
from .models import (
    SP2_RULES,
    Quadrics,
    Sp2Result,
    check_sp2,
    exceptional_model,
    form_weight,
    hyperplane_model,
    normalized_phi,
    quadrics,
    structure_table,
    web_coframe,
)

__all__ = [
    "SP2_RULES", "Quadrics", "Sp2Result", "check_sp2", "exceptional_model", "form_weight",
    "hyperplane_model", "normalized_phi", "quadrics", "structure_table", "web_coframe",
]
