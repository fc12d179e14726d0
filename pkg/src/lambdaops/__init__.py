"""Exact computations with exterior powers of binary multicomplexes."""

from .linalg import *  # noqa: F401,F403
from .sparse import *  # noqa: F401,F403
from .complexes import *  # noqa: F401,F403
from .functors import *  # noqa: F401,F403
from .simplicial import *  # noqa: F401,F403
from .engine import *  # noqa: F401,F403
from .exact import *  # noqa: F401,F403
from .derived import *  # noqa: F401,F403
from .witness import *  # noqa: F401,F403
from .validator import *  # noqa: F401,F403
from .symfunc import *  # noqa: F401,F403
from .schur import *  # noqa: F401,F403

__version__ = "0.1.0"
