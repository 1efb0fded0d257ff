"""
:Date: 22.02.2026

..	versionadded:: v0.1.0
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

import enum
import io
import json
import math
import os
import tempfile
import unittest

import numpy as np

from HillGap.HGIO import ConsoleArguments, ConsoleArgsError, parse_real, load_config, json_ready, json_str, \
	write_json, write_csv
from HillGap.HGUtils import ConfigError

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ TESTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

class _Side(enum.Enum):
	HALF = "half"

class _Result:

	def to_json_dict(self):
		return {"count": np.int64(2), "edges": np.array([0.5, 1.5])}

# noinspection PyTypeChecker
class TestConsoleArgumentsMethods(unittest.TestCase):

	# Set up a console arg manager with inputs:
	#		args	: -v -v
	#		kwargs: --family=mathieu, --range -1 5
	#		pars	: bands
	def setUp(self):
		self.CAM = ConsoleArguments(["h", "v", "q"], ["family=", "range=", "gap=", "gamma="],
									["-v", "bands", "--family", "mathieu", "--range", "-1", "5", "-v"],
									multi_value={"range": 2, "gap": 2})

	def tearDown(self):
		del self.CAM

	def test_parse(self):
		self.assertEqual("bands", self.CAM[0])
		self.assertEqual("mathieu", self.CAM["family"])
		self.assertListEqual(["-1", "5"], self.CAM.values("range"))
		self.assertEqual(2, self.CAM.count("v"))
		self.assertEqual(0, self.CAM.count("q", "h"))

	def test_get(self):
		self.assertEqual("mathieu", self.CAM.get("family"))
		self.assertEqual("1.0", self.CAM.get("gamma", default="1.0"))
		self.assertIsNone(self.CAM.get("gap"))

	def test_contains(self):
		with self.subTest(type="int"):
			self.assertIn(0, self.CAM)
			self.assertNotIn(1, self.CAM)

		with self.subTest(type="str"):
			self.assertIn("v", self.CAM)
			self.assertIn("family", self.CAM)
			self.assertNotIn("gamma", self.CAM)

		with self.subTest(type="list"):
			self.assertIn(["v", "range", 0], self.CAM)
			self.assertNotIn(["v", "gap"], self.CAM)

		with self.assertRaises(TypeError):
			a = object() in self.CAM

	def test_getitem_errors(self):
		with self.assertRaises(KeyError):
			a = self.CAM["gamma"]
		with self.assertRaises(KeyError):
			a = self.CAM[3]
		with self.assertRaises(TypeError):
			a = self.CAM[["family"]]

	def test_errors(self):
		with self.subTest(error="missing value"):
			with self.assertRaises(ConsoleArgsError):
				ConsoleArguments(["v"], ["range="], ["--range", "1"], multi_value={"range": 2})

		with self.subTest(error="unknown flag"):
			with self.assertRaises(ConsoleArgsError):
				ConsoleArguments(["v"], ["range="], ["--bogus"])

		with self.subTest(error="overlap"):
			with self.assertRaises(ValueError):
				ConsoleArguments(["a", "b:"], ["a=", "c"], no_load=True)

# noinspection PyTypeChecker
class TestParseReal(unittest.TestCase):

	def test_values(self):
		for raw, expected in (("1", 1.0), ("-2.5", -2.5), ("1e-10", 1e-10), ("pi", math.pi), ("2pi", 2 * math.pi),
							  ("-pi/2", -math.pi / 2), ("10*pi", 10 * math.pi), (3, 3.0), (0.25, 0.25)):
			with self.subTest(raw=raw):
				self.assertAlmostEqual(expected, parse_real(raw), places=14)

	def test_errors(self):
		for raw in ("abc", "", "pi pi", True):
			with self.subTest(raw=raw):
				with self.assertRaises(ValueError):
					parse_real(raw)

# noinspection PyTypeChecker
class TestConfig(unittest.TestCase):

	def setUp(self):
		self.directory = tempfile.TemporaryDirectory()
		self.schema = {"base": {"family": str, "gamma": parse_real}, "run": {"tol": parse_real}}

	def tearDown(self):
		self.directory.cleanup()
		del self.directory, self.schema

	def _write(self, text: str) -> str:
		path = os.path.join(self.directory.name, "run.toml")
		with open(path, "w", encoding="utf-8") as f:
			f.write(text)
		return path

	def test_load(self):
		path = self._write('[base]\nfamily = "mathieu"\ngamma = "pi/2"\n\n[run]\ntol = 1e-10\n')
		config = load_config(path, self.schema)
		self.assertEqual("mathieu", config["base"]["family"])
		self.assertAlmostEqual(math.pi / 2, config["base"]["gamma"])
		self.assertEqual(1e-10, config["run"]["tol"])

	def test_unknown_key_line(self):
		path = self._write('[base]\nfamily = "mathieu"\ngama = 1.0\n')
		with self.assertRaises(ConfigError) as context:
			load_config(path, self.schema)
		self.assertEqual(3, context.exception.lineno)
		self.assertIn("gama", str(context.exception))

	def test_unknown_section(self):
		path = self._write('[base]\nfamily = "free"\n\n[plot]\ncolor = "red"\n')
		with self.assertRaises(ConfigError) as context:
			load_config(path, self.schema)
		self.assertEqual(4, context.exception.lineno)

	def test_bad_value(self):
		path = self._write('[base]\ngamma = "one"\n')
		with self.assertRaises(ConfigError) as context:
			load_config(path, self.schema)
		self.assertEqual(2, context.exception.lineno)

	def test_invalid_toml(self):
		path = self._write('[base\nfamily = 1\n')
		with self.assertRaises(ConfigError):
			load_config(path, self.schema)

	def test_missing_file(self):
		with self.assertRaises(ConfigError):
			load_config(os.path.join(self.directory.name, "missing.toml"), self.schema)

# noinspection PyTypeChecker
class TestJSON(unittest.TestCase):

	def test_json_ready(self):
		with self.subTest(kind="to_json_dict"):
			self.assertDictEqual({"count": 2, "edges": [0.5, 1.5]}, json_ready(_Result()))

		with self.subTest(kind="scalars"):
			self.assertListEqual([1.0, -2.0], json_ready(1 - 2j))
			self.assertEqual("inf", json_ready(math.inf))
			self.assertEqual("-inf", json_ready(-np.inf))
			self.assertEqual("nan", json_ready(float("nan")))
			self.assertIs(True, json_ready(np.bool_(True)))
			self.assertEqual("half", json_ready(_Side.HALF))

		with self.subTest(kind="containers"):
			self.assertDictEqual({"1": [1, 2]}, json_ready({1: (1, 2)}))

		with self.assertRaises(TypeError):
			json_ready(object())

	def test_json_str_sorted(self):
		text = json_str({"b": 1, "a": 2.5})
		self.assertLess(text.index('"a"'), text.index('"b"'))
		self.assertDictEqual({"a": 2.5, "b": 1}, json.loads(text))

	def test_write(self):
		stream = io.StringIO()
		write_json({"edges": (0.5,)}, stream=stream)
		self.assertDictEqual({"edges": [0.5]}, json.loads(stream.getvalue()))

		with tempfile.TemporaryDirectory() as directory:
			path = os.path.join(directory, "trace.csv")
			write_csv(path, ("x", "u"), [(0.0, 1.0), (0.1, np.float64(0.9))])
			with open(path, "r", encoding="utf-8") as f:
				lines = f.read().splitlines()
			self.assertListEqual(["x,u", "0.0,1.0", "0.1,0.9"], lines)

if __name__ == "__main__":
	pass
