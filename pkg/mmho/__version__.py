# coding: utf-8

"""
Simulate mmWave beam sequences on a street scenario and learn to predict proactive base station
hand-offs with a gated recurrent network.
"""

__author__ = "mmho developers"
__email__ = ""
__copyright__ = "Copyright 2024, mmho developers"
__credits__ = ["mmho developers"]
__contact__ = "mmho developers"
__license__ = "BSD-3-Clause"
__status__ = "Development"
__version__ = "0.1.0"
