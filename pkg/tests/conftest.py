"""Shared knowledge bases used across the test modules.

Each fixture is a small KB exercising a different interaction between the
closures; expected values in the tests were cross-checked against the
model-based engines and the brute-force oracle before being frozen.
"""

import pytest

from defq import KnowledgeBase, parse_kb

TAXES_KB_TEXT = """\
# students normally do not pay taxes and are young;
# employed students normally pay taxes
Student |~ !Pay_Taxes
Student |~ Young
Employee & Student |~ Pay_Taxes
"""

BRIGHT_KB_TEXT = """\
Student |~ !Pay_Taxes
Student |~ Bright
Employee |~ Pay_Taxes
Employee & Student |~ Busy
"""

CONFLICT_KB_TEXT = """\
# students and employees disagree on both youth and taxes;
# the employee side is packed into a single default
Student |~ !Pay_Taxes
Student |~ Young
Employee |~ !Young & Pay_Taxes
Employee & Student |~ Busy
"""

CONFLICT_SPLIT_KB_TEXT = """\
# same as the conflict KB but with the employee default split in two
Student |~ !Pay_Taxes
Student |~ Young
Employee |~ !Young
Employee |~ Pay_Taxes
Employee & Student |~ Busy
"""

SWIMMER_KB_TEXT = """\
# two independent reasons against Young, one for it
Olympic_Swimmer |~ Young
Adult |~ !Young
Employee |~ !Young
"""

MERRY_KB_TEXT = """\
# student adults: the compound default makes Young/Merry/Serious interact
Student |~ Merry
Student |~ Young
Adult |~ Serious
Student & Adult |~ (!Young & !Merry) | !Serious
"""

RESIDENCE_KB_TEXT = """\
# the last three defaults can never be violated (infinite rank)
Italian |~ Residence_in_Italy
German |~ Residence_in_Germany
Residence_in_Italy & !Has_Residence |~ false
Residence_in_Germany & !Has_Residence |~ false
Residence_in_Italy & Residence_in_Germany |~ false
"""

REDUNDANT_KB_TEXT = """\
# three logically equivalent defaults for a, two independent ones for c
a |~ e & f
a |~ e & f & e
a |~ e & f & e & f
c |~ !e
c |~ !f
"""


@pytest.fixture
def taxes_kb() -> KnowledgeBase:
    return parse_kb(TAXES_KB_TEXT)


@pytest.fixture
def bright_kb() -> KnowledgeBase:
    return parse_kb(BRIGHT_KB_TEXT)


@pytest.fixture
def conflict_kb() -> KnowledgeBase:
    return parse_kb(CONFLICT_KB_TEXT)


@pytest.fixture
def conflict_split_kb() -> KnowledgeBase:
    return parse_kb(CONFLICT_SPLIT_KB_TEXT)


@pytest.fixture
def swimmer_kb() -> KnowledgeBase:
    return parse_kb(SWIMMER_KB_TEXT)


@pytest.fixture
def merry_kb() -> KnowledgeBase:
    return parse_kb(MERRY_KB_TEXT)


@pytest.fixture
def residence_kb() -> KnowledgeBase:
    return parse_kb(RESIDENCE_KB_TEXT)


@pytest.fixture
def redundant_kb() -> KnowledgeBase:
    return parse_kb(REDUNDANT_KB_TEXT)
