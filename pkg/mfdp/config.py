import os
from pydantic import BaseModel
from dotenv import load_dotenv

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
ENV_PATH = os.path.join(BASE_DIR, ".env")
load_dotenv(ENV_PATH)


class Settings(BaseModel):
    # Окно порогов 𝕋=[s1,s2] по умолчанию (как в симуляциях: [0, 0.1])
    ENVELOPE_WINDOW_START: float = float(os.getenv("ENVELOPE_WINDOW_START", "0.0"))
    ENVELOPE_WINDOW_END: float = float(os.getenv("ENVELOPE_WINDOW_END", "0.1"))
    # Сколько точек скачка B̃ максимум выводим в CSV огибающей
    ENVELOPE_MAX_JUMPS: int = int(os.getenv("ENVELOPE_MAX_JUMPS", "200000"))

    CONTROL_DEFAULT_GAMMA: float = float(os.getenv("CONTROL_DEFAULT_GAMMA", "0.05"))

    # Перебор подмножеств экспоненциальный - выше этого размера отказываемся
    CLOSED_TESTING_MAX_SET: int = int(os.getenv("CLOSED_TESTING_MAX_SET", "22"))

    SIM_WORKERS: int = int(os.getenv("SIM_WORKERS", str(os.cpu_count() or 1)))
    SIM_CHUNK_SIZE: int = int(os.getenv("SIM_CHUNK_SIZE", "250"))
    SIM_DEFAULT_REPS: int = int(os.getenv("SIM_DEFAULT_REPS", "10000"))
    SIM_DEFAULT_SEED: int = int(os.getenv("SIM_DEFAULT_SEED", "20240101"))

    OUTPUT_FLOAT_DIGITS: int = int(os.getenv("OUTPUT_FLOAT_DIGITS", "17"))



settings = Settings()
