# data folder
DATA_FOLDER = 'cutlocus_data'


# geometry tolerances
FLAT_TOLERANCE = 1e-9  # flat/exact checks, also angle and area sums
HYPERBOLIC_TOLERANCE = 1e-7  # equidistance in the Poincare disk
IDENTITY_TOLERANCE = 1e-12  # relative, right-triangle identities

# verification
DEFAULT_SAMPLES = 1000
DEFAULT_SEED = 42


# census
CENSUS_LIMIT = 200_000  # max of prod((deg(v) - 1)!) * 2**m
CENSUS_WORKERS = 1


# eikonal solver
MIN_RESOLUTION = 64  # grid cells across the shortest lattice vector
CONFIDENT_RESOLUTION = 128  # below this degree 4 vs 3+3 is not decided
DEFAULT_RESOLUTION = 257  # odd: grid nodes stay off the bisectors of x
SWEEP_TOLERANCE = 1e-10
MAX_SWEEPS = 60
SOURCE_RADIUS_CELLS = 3  # exact distances frozen around every source
WINDOW_FACTOR = 2.2  # window half-width in cell circumradii


# cut locus extraction
NOISE_ARC_CELLS = 1.0  # paired boundary runs shorter than this are merged
MIN_ARC_CELLS = 4  # shorter paired runs are kept but not confident
MERGE_ANGLE_DEGREES = 15  # arcs closer than this at a vertex: low confidence
RIDGE_KINK = 0.25  # slope drop across a ridge per unit slowness
RIDGE_MARGIN_CELLS = 2  # ridges are looked for this far inside the cell
MIN_RIDGE_CELLS = 6  # shorter skeleton pieces are noise
RIDGE_ATTACH_CELLS = 6  # max gap between a ridge and the cell boundary


# stability scan
TRANSITION_TOLERANCE = 1e-3  # fraction of path length
