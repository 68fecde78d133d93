"""UAV data-harvesting network performance: closed-form interference,
coverage, rate, and harvested-data formulas with a Monte Carlo verifier."""

from ._core import *  # noqa: F401,F403
from ._core import tool_version

__version__ = tool_version().split()[-1]
