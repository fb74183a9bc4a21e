"""Trace-coordinate slices of the deformation space of once-punctured torus groups."""
__version__ = "0.1.0"

from .coords import (  # noqa: E402
    BranchError, DegenerateError, DomainError, FNCoords, PuncturedTorusRep, TraceTriple,
    complex_length, gamma_branch, trace_from_length,
)
from .discreteness import (  # noqa: E402
    ExteriorCertified, ExteriorLikely, PresumedMember, ScanParams, membership_fn,
    membership_maskit, membership_trace, scan,
)
from .slices import (  # noqa: E402
    SliceRaster, Window, raster_fn, raster_iM, raster_iM_zeta, raster_linear, raster_m_zeta,
    raster_maskit, read_raster, write_raster,
)
