"""Regular elliptic numbers, unipotent monodromy, Springer fibres and Levi data."""

from src.weylcomb.consistency import check_row, consistency_check, table_rows
from src.weylcomb.elliptic import regular_elliptic_numbers, root_count
from src.weylcomb.levi import levi_length, parahoric_datum
from src.weylcomb.monodromy import unipotent_monodromy_class
from src.weylcomb.springer import centralizer_dimension_oracle, springer_fiber_dim

__all__ = [
    "centralizer_dimension_oracle",
    "check_row",
    "consistency_check",
    "levi_length",
    "parahoric_datum",
    "regular_elliptic_numbers",
    "root_count",
    "springer_fiber_dim",
    "table_rows",
    "unipotent_monodromy_class",
]
