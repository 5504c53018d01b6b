# settings.py
import os
from dotenv import load_dotenv

load_dotenv()

# ==================== MODEL DEFAULTS ====================
# Dissipation strength and asymmetry used for both experiments
GAMMA = float(os.getenv('GAMMA', 100.0))
MU = float(os.getenv('MU', 1.0))
# Sigmoid steepness for the classifier read-out
SIGMOID_K = float(os.getenv('SIGMOID_K', 10.0))
N_AUX = int(os.getenv('N_AUX', 2))

# Full-model dense solver cap: Liouvillian dimension 4^(N+1)
FULL_SOLVER_MAX_AUX = int(os.getenv('FULL_SOLVER_MAX_AUX', 4))

# ==================== NUMERICAL TOLERANCES ====================
HERMITIAN_TOL = 1e-10
STEADY_STATE_TOL = float(os.getenv('STEADY_STATE_TOL', 1e-8))
# Tolerance of the density-matrix checks run on computed states
STATE_TOL = float(os.getenv('STATE_TOL', 1e-8))
ROUTE_TOL = float(os.getenv('ROUTE_TOL', 1e-8))
PROB_EPS = 1e-12
LOSS_FLOOR = 1e-10

# ==================== TRAINING DEFAULTS ====================
FD_STEP = float(os.getenv('FD_STEP', 1e-4))
ETA = 0.05
ETA_MAX = 0.05
ETA_MIN = 0.001
INIT_STD = 0.5
STATE_PREP_EPOCHS = 500
CLASSIFIER_EPOCHS = 400
LOSS_THRESHOLD = 1e-2

# ==================== DATA DEFAULTS ====================
N_TRAIN = 200
N_VALID = 1000
VALIDATION_GAMMAS = (50.0, 100.0, 1000.0)

# ==================== RUNTIME ====================
THREADS = int(os.getenv('THREADS', 1))
LOG_EVERY = int(os.getenv('LOG_EVERY', 25))
PROGRESS = os.getenv('PROGRESS', 'False').lower() == 'true'
ARTIFACT_VERSION = 1
