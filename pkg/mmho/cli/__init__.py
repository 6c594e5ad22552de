# coding: utf-8

"""
Main mmho command line interface.
"""

__all__ = ["run"]


# provisioning imports
from mmho.cli.cli import run
