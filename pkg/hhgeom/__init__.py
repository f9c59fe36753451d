"""Import the main objects of hhgeom."""
from hhgeom._version import __version__
from hhgeom.bodies import BodyFamily, make_body
from hhgeom.functional import ConcaveFn, ConvexGauge, IntegralEstimate
from hhgeom.marginals import BrunnProfile, Subspace, project, section
from hhgeom.polytope import Polytope, Simplex, centroid, hull, to_hrep, to_vrep, volume
from hhgeom.reports import InequalityReport, PropertyReport, TightnessResult
from hhgeom.symmetrize import CylinderFamily, SchwarzProfile, schwarz_profile
from hhgeom.verify import run_check, tightness_search
