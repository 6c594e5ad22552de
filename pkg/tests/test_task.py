# coding: utf-8

__all__ = ["TestTasks"]

import json
import os
import shutil
import tempfile
import unittest

import luigi

from mmho.config import Config
from mmho.cli.cli import build
from mmho.dataset import load
from mmho.task import GenerateDataset
from mmho.util import ConfigError


SCENARIO = """
[array]

num_antennas: 8
oversampling: 2
num_subcarriers: 16

[mobility]

max_seq_len: 40
"""


class TestTasks(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.tmp_dir = tempfile.mkdtemp()
        cls.config = os.path.join(cls.tmp_dir, "street.cfg")
        with open(cls.config, "w") as f:
            f.write(SCENARIO)

    @classmethod
    def tearDownClass(cls):
        shutil.rmtree(cls.tmp_dir)

    def generate_task(self, name, **kwargs):
        kwargs.setdefault("episodes", 3)
        kwargs.setdefault("seed", 1)
        kwargs.setdefault("config", self.config)
        return GenerateDataset(out=os.path.join(self.tmp_dir, name), **kwargs)

    def test_luigi_logging_config(self):
        Config.instance()
        cfg = luigi.configuration.get_config()
        self.assertTrue(cfg.getboolean("core", "no_configure_logging"))

    def test_generate_dataset(self):
        task = self.generate_task("gen_a")
        self.assertFalse(task.complete())

        self.assertIs(build(task), task)
        self.assertTrue(task.complete())

        outputs = task.output()
        self.assertTrue(os.path.isfile(outputs["dataset"].path))
        self.assertEqual(len(load(outputs["dataset"].path)), 3)
        with open(outputs["manifest"].path) as f:
            self.assertEqual(json.load(f)["episodes"], 3)

    def test_existing_outputs(self):
        task = self.generate_task("gen_b", seed=2)
        build(task)
        path = task.output()["dataset"].path
        mtime = os.path.getmtime(path)

        with self.assertLogs("mmho", "WARNING") as cm:
            build(task)
        self.assertTrue(any("--remove-output" in msg for msg in cm.output))
        self.assertEqual(os.path.getmtime(path), mtime)

        task.remove_output()
        self.assertFalse(task.complete())
        self.assertFalse(os.path.exists(path))

        build(task, remove_output=True)
        self.assertTrue(task.complete())

    def test_failure(self):
        task = self.generate_task("gen_c", config=os.path.join(self.tmp_dir, "missing.cfg"))
        with self.assertRaises(ConfigError):
            build(task)
        self.assertFalse(task.complete())
