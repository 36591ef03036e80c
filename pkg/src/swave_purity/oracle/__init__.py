"""Independent numerical checks of the closed-form results."""

from .grid import ExpansionReport, GridState, expansion_check, four_index_purity, grid_purity_exact
from .overlaps import mc_overlap_I2_I3
from .quadrature import epsilon_sq_quadrature, overlap_I1
from .shell import (
    RadialGridSpec,
    SectorDecomposition,
    SectorTruncationError,
    mc_shell_norm,
    mc_shell_purity,
    shell_purity,
    shell_sector_decompose,
)
from .streams import McEstimate, mc_mean, mc_stream
