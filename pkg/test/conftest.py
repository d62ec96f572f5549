# Case directories hold CLI input documents only; nothing there is collected.
# Paths are relative to this conftest (test/).
import os

from hypothesis import settings

collect_ignore = ["cases", "config"]

# `HYPOTHESIS_PROFILE=thorough pytest test/` widens the property sweeps.
settings.register_profile("default", deadline=None)
settings.register_profile("thorough", deadline=None, max_examples=1000)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))
