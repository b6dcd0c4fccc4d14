"""
Tests for report normalization and artifact text
"""

import json

import numpy as np
import pandas as pd

from reporting.reporter import ReportGenerator, normalize


class TestNormalize:
    def test_floats_keep_thirteen_digits(self):
        assert normalize(1 / 3) == 0.3333333333333
        assert normalize(2.0) == 2.0
        assert normalize(np.float64(1e-20 / 3)) == 3.333333333333e-21

    def test_containers_and_special_values(self):
        data = normalize({'z': 1 + 2j, 'arr': np.array([0.5, 1.5]), 'flag': np.bool_(True),
                          'n': np.int64(3), 'bad': float('nan')})
        assert data == {'z': [1.0, 2.0], 'arr': [0.5, 1.5], 'flag': True, 'n': 3, 'bad': 'nan'}


class TestArtifacts:
    def test_json_text_is_stable(self):
        generator = ReportGenerator()
        text = generator.to_json({'b': 1 / 3, 'a': [0.1 + 0.2]})
        assert text == '{\n  "a": [\n    0.3\n  ],\n  "b": 0.3333333333333\n}\n'
        assert json.loads(text)['b'] == 0.3333333333333

    def test_csv_uses_fixed_format(self):
        text = ReportGenerator().to_csv(pd.DataFrame({'s': [0.0], 'f': [1 / 3]}))
        assert text.splitlines() == ['s,f', '0.000000000000e+00,3.333333333333e-01']
