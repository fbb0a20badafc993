"""Growth of birational surface maps from exact lattice data."""
from .errors import (CapabilityError, DataConsistencyError, FormalResultWarning, PrecisionError,
                     ResourceError, SurfdynError)
from .lattice import DivisorClass, PolarizedLattice, projective_plane, quadric_surface
from .maps import PullbackMapData, Stability, compose, iterate, normalize_model
from .growth import GK, Case, Geometric, GrowthData, classify, spectral_radius
from .hilbert import fit_growth, hilbert_sequence, selfint_recurrence_check
from .curves import RationalSubspace, product_growth, recurrence_lower_bound
from .cremona import (RationalMapP2, compose_reduce, degree_sequence, stability_check,
                      standard_cremona, unbalanced_scan)
from .io import Catalog

__version__ = "0.1.0"
