"""Default tolerances and sizes, overridable per call and from the CLI.

All absolute tolerances assume canonically normalized covectors and scene
coordinates of order one to a few tens.
"""

EPS_INCIDENCE = 1e-9          # |dot| below this counts as incident
RANK_TOL = 1e-10              # singular values below this count as zero

HULL_POINTS = 256             # polygon/point-cloud approximation of circles and balls
CURVE_TOL_FACTOR = 1e-6       # implicit-curve vertex tolerance, times bbox diameter
CLUSTER_RADIUS_FACTOR = 1e-3  # contact clustering radius, times shape diameter

DIRECTIONS_2D = 4096          # condition-check direction samples, n = 2
DIRECTIONS_3D = 16384         # condition-check direction samples, n = 3
CLEARANCE_FLOOR = 1e-6        # minimum per-direction miss clearance for acceptance
CONJ_MARGIN_FACTOR = 1e-3     # interiority margin, times scene diameter
CONJ_SAMPLES = 2048           # direction samples for the weaker-condition tester

RESOLUTION_2D = 256           # dual-region raster, points per axis, n <= 2
RESOLUTION_3D = 96            # dual-region raster, points per axis, n = 3
BOUNDS_INIT = 2.0             # initial dual-chart raster half-width
BOUNDS_CAP = 1024.0           # give up on compactness beyond this half-width

EPS_RESIDUAL = 1e-8           # refinement stops when the squared-penalty sum drops below
REFINE_MAX_ITER = 500         # refinement line-search budget
CONTACT_TOL_EXACT = 1e-8      # verification tolerance for closed-form backends
CONTACT_TOL_REFINED = 2e-4    # verification tolerance after numeric refinement

THETA_DEDUP = 1e-4            # certificates within this angle are the same hyperplane
THETA_FAMILY = 1e-2           # chained clusters wider than this flag a continuum family

SWEEP_GRID_2D = 720           # sweep directions over the half-circle
SWEEP_GRID_3D = 256           # sweep grid per angle over the hemisphere
BISECTION_DEPTH = 60          # sweep root sharpening
