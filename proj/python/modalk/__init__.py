from _modalk import *  # noqa: F401,F403
