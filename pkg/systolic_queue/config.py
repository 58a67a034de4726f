import os
from dotenv import load_dotenv

load_dotenv()

LOG_LEVEL = os.getenv('PQSIM_LOG_LEVEL', 'WARNING').upper()
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

DEFAULT_BLOCKS = int(os.getenv('PQSIM_DEFAULT_BLOCKS', '4'))
DEFAULT_SLOTS = int(os.getenv('PQSIM_DEFAULT_SLOTS', '4'))
DEFAULT_DATA_WIDTH = int(os.getenv('PQSIM_DEFAULT_DATA_WIDTH', '16'))

# enable, compare, set-and-shift, finish
STAGE_CYCLES = 4
MIN_ISSUE_INTERVAL = STAGE_CYCLES
DEFAULT_ISSUE_INTERVAL = MIN_ISSUE_INTERVAL
