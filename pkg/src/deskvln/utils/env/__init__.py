"""
Layered run configuration.

Sources, lowest to highest priority:
1. deskvln/assets/defaults.env (built-in defaults shipped with the package)
2. .env in the project root
3. the file given with --config
4. DVLN_* variables in os.environ
5. command-line flags (handled by each argparse parser)
"""
from .env import Env, env, ENV_PREFIX, DEFAULTS_FILE
from .coerce import coerce, coerce_bool, coerce_int, coerce_float, coerce_path
