"""Top-level package for haltbound."""

import importlib.metadata

from haltbound.complexity import *  # noqa: F401,F403
from haltbound.horizon import *  # noqa: F401,F403
from haltbound.interval import *  # noqa: F401,F403
from haltbound.probability import *  # noqa: F401,F403

__version__ = importlib.metadata.version(__name__)

del importlib
