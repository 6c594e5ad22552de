# coding: utf-8

__all__ = []

# adjust the path to import mmho
import os
import sys
base = os.path.normpath(os.path.join(os.path.abspath(__file__), "../.."))
sys.path.append(base)

# import all tests
from .test_util import *  # noqa
from .test_config import *  # noqa
from .test_parameter import *  # noqa
from .test_decorator import *  # noqa
from .test_channel import *  # noqa
from .test_codebook import *  # noqa
from .test_scenario import *  # noqa
from .test_dataset import *  # noqa
from .test_model import *  # noqa
from .test_checkpoint import *  # noqa
from .test_train import *  # noqa
from .test_plot import *  # noqa
from .test_task import *  # noqa
from .test_cli import *  # noqa
