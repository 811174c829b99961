"""Runtime limits for explicit enumerations and searches."""

from __future__ import annotations

import os

# Explicit ontic enumerations are refused above this many points unless the
# caller passes a larger cap.  Overridable via the TOY_ENUM_CAP env variable.
DEFAULT_ENUM_CAP = 65536

# Exhaustive symplectic-group searches are refused above this order unless the
# caller opts in; |Sp(4,2)| = 720 fits, |Sp(6,2)| = 1451520 does not.
DEFAULT_GROUP_CAP = 12000


def enumeration_cap(explicit: int | None = None) -> int:
    if explicit is not None:
        return int(explicit)
    env = os.environ.get("TOY_ENUM_CAP")
    if env is not None:
        return int(env)
    return DEFAULT_ENUM_CAP
