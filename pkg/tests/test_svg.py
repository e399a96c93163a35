import xml.etree.ElementTree as ET

import numpy as np

from gronbound.svg import Series, line_chart


def test_chart_is_valid_xml_with_gaps():
    x = np.linspace(0, 1, 11)
    y = x ** 2
    y[5] = np.nan
    doc = line_chart([Series(x, y, "a & b", "red"), Series(x, x, "lin", "blue", "2,4")], "t", "x", "y")
    root = ET.fromstring(doc)
    lines = root.findall("{http://www.w3.org/2000/svg}polyline")
    assert len(lines) == 3
    assert lines[2].get("stroke-dasharray") == "2,4"


def test_chart_constant_series():
    doc = line_chart([Series([0, 1], [0, 0], "zero")])
    ET.fromstring(doc)
