import logging
import os

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
LOG_DIR = os.environ.get("LOG_DIR", os.path.join(BASE_DIR, "logs"))
MFDP_LOG_FILE = os.path.join(LOG_DIR, "mfdp.log")
SIMULATION_LOG_FILE = os.path.join(LOG_DIR, "simulation.log")
CLOSED_TESTING_LOG_FILE = os.path.join(LOG_DIR, "closed_testing.log")


os.makedirs(LOG_DIR, exist_ok=True)

formatter = logging.Formatter(
    "%(asctime)s - %(levelname)s - %(message)s"
)

# ===== основной логгер анализа =====
mfdp_logger = logging.getLogger("mfdp")
mfdp_logger.setLevel(logging.INFO)

if not mfdp_logger.handlers:
    mfdp_fh = logging.FileHandler(MFDP_LOG_FILE, encoding="utf-8")
    mfdp_fh.setLevel(logging.INFO)
    mfdp_fh.setFormatter(formatter)
    mfdp_logger.addHandler(mfdp_fh)


# ===== логгер Monte Carlo симуляций =====
simulation_logger = logging.getLogger("mfdp_simulation")
simulation_logger.setLevel(logging.INFO)

if not simulation_logger.handlers:
    sim_fh = logging.FileHandler(SIMULATION_LOG_FILE, encoding="utf-8")
    sim_fh.setLevel(logging.INFO)
    sim_fh.setFormatter(formatter)
    simulation_logger.addHandler(sim_fh)


def get_logger():
    return mfdp_logger


def get_simulation_logger():
    return simulation_logger


# ===== логгер closed testing (оракулы, проверка эквивалентности) =====
closed_testing_logger = logging.getLogger("mfdp_closed_testing")
closed_testing_logger.setLevel(logging.INFO)

if not closed_testing_logger.handlers:
    ct_fh = logging.FileHandler(CLOSED_TESTING_LOG_FILE, encoding="utf-8")
    ct_fh.setLevel(logging.INFO)
    ct_fh.setFormatter(formatter)
    closed_testing_logger.addHandler(ct_fh)


def get_closed_testing_logger():
    return closed_testing_logger
