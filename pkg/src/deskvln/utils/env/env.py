import re
from pathlib import Path

from deskvln.utils.assets import asset_path
from deskvln.utils.env.coerce import coerce
from deskvln.utils.env.load import load_env_raw
from deskvln.utils.find_project_root import find_project_root


ENV_PREFIX = "DVLN_"
DEFAULTS_FILE = asset_path("defaults.env")

# "%" alone or "%" followed by a path separator, at the start of a value
ROOT_TOKEN = re.compile(r"^%(?=$|[/\\])")


def apply_project_root(env_dict: dict[str, str], project_root: Path) -> dict[str, str]:
    """Expand a leading % (alone or before a separator) to the project root."""
    root = str(Path(project_root).expanduser().resolve())
    return {k: ROOT_TOKEN.sub(lambda _: root, v, count=1) for k, v in env_dict.items()}


class Env:
    """
    Merged view of every configuration layer.

    The built-in defaults, the project .env and os.environ are read on first access
    (or on construction unless lazy is set). use_config_file() re-merges with a
    --config file inserted below the environment variables.
    """

    def __init__(self, config_file: str | Path | None = None, lazy: bool = False):
        self.config_file = config_file
        self.project_root: Path | None = None
        self._raw: dict[str, str] | None = None
        if not lazy:
            self.reload()

    @property
    def raw(self) -> dict[str, str]:
        if self._raw is None:
            self.reload()
        return self._raw

    def reload(self) -> None:
        self.project_root = find_project_root()
        raw = load_env_raw(
            DEFAULTS_FILE,
            self.project_root / ".env",
            self.config_file,
            "os.environ",
            cwd=Path.cwd(),
            prefix=ENV_PREFIX,
        )
        self._raw = apply_project_root(raw, self.project_root)

    def use_config_file(self, config_file: str | Path | None) -> None:
        self.config_file = config_file
        self.reload()

    def __iter__(self):
        return iter(self.raw)

    def __contains__(self, key):
        return key in self.raw

    def get(self, key, default=None):
        value = self.raw.get(key)
        return default if value in (None, "") else value

    def get_as(self, key: str, type, default=None):
        value = coerce(self.raw.get(key, ""), type)
        return default if value is None else value

    def with_prefix(self, prefix: str) -> dict[str, str]:
        """All non-empty keys starting with prefix, with the prefix stripped."""
        return {k[len(prefix):]: v for k, v in self.raw.items() if k.startswith(prefix) and v}


env = Env(lazy=True)
