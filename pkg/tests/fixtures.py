"""Shared fixture data: two reference molecules and their recorded
fragment-search tables.

The tables are historical snapshots of a 2010-era public web search
engine: for each molecule, fragments of 2..18 symbols were submitted as
literal queries and the reported hit counts written down.  Those counts
are frozen here as test fixtures — they are not reproducible against any
live engine.

Three rows of the recorded tables contain transcription defects, repaired
as follows (``printed`` keeps the string exactly as recorded, ``search``
holds the repaired form used for substring/window checks):

- Nelarabine, 8 symbols: recorded as ``COC1=NC{``; ``{`` is not a SMILES
  character and the matching 8-symbol window of the parent is
  ``COC1=NC(``.
- Midazolam, 8 symbols: recorded as ``(C=C3)CI`` (letter I); the parent
  string has ``(C=C3)Cl`` (chlorine) at that spot.  Note the recorded
  form counts 8 symbols (C and I are two atoms) while the repaired form
  counts 7 (Cl is one two-character atom token).
- Midazolam, 14 symbols: recorded as ``C1=NC=C2N1C3)C``, which is not a
  contiguous substring of the parent; the contiguous 14-symbol window is
  ``C1=NC=C2N1C3=C``.

One Midazolam row is internally inconsistent: 22_900 ("229·10^2") is
recorded next to log value 8.36.  The log column is treated as
authoritative (matching the plotted point), reading the size as 229·10^6;
``printed_size`` keeps the recorded number and ``adopted_size`` the
repaired one.
"""

from dataclasses import dataclass

NELARABINE = "COC1=NC(N)=NC2=C1N=CN2C1OC(CO)C(O)C1O"
MIDAZOLAM = "CC1=NC=C2N1C3=C(C=C(C=C3)Cl)C(=NC2)C4=CC=CC=C4F"

NELARABINE_FORMULA = "C11H15N5O5"
MIDAZOLAM_FORMULA = "C18H13ClFN3"

REFERENCE_FRAGMENT = "(N)=NC2=C1N=CN2C"  # the canonical 16-symbol example


@dataclass(frozen=True)
class RecordedRow:
    symbols: int           # the "# symbols" column as recorded
    printed_size: int      # hit count as recorded
    printed_log: float     # log column as recorded
    printed_fragment: str  # fragment string as recorded
    search_fragment: str   # repaired string (contiguous window of the parent)
    adopted_size: int      # size after the authoritative-log repair


def _row(symbols, size, log, fragment, search=None, adopted=None):
    return RecordedRow(
        symbols, size, log, fragment,
        search if search is not None else fragment,
        adopted if adopted is not None else size,
    )


NELARABINE_TABLE = (
    _row(2, 38_500_000, 7.59, "NC"),
    _row(4, 772_000, 5.89, "CN2C"),
    _row(6, 189_000_000, 8.28, "=NC2=C"),
    _row(8, 19_000_000, 7.28, "COC1=NC{", search="COC1=NC("),
    _row(10, 9_140, 3.96, "NC2=C1N=CN"),
    _row(12, 21, 1.32, "CN2C1OC(CO)C"),
    _row(14, 3_800, 3.58, "NC(N)=NC2=C1N="),
    _row(16, 165, 2.22, "(N)=NC2=C1N=CN2C"),
    _row(18, 2_540, 3.40, "C1=NC(N)=NC2=C1N=C"),
)

MIDAZOLAM_TABLE = (
    _row(2, 14_900_000, 7.17, "C1"),
    _row(4, 2_100_000, 6.32, "C1=N"),
    _row(6, 22_900, 8.36, "N1C3=C", adopted=229_000_000),
    _row(8, 729_000, 5.86, "(C=C3)CI", search="(C=C3)Cl"),
    _row(10, 368_000, 5.56, "C(=NC2)C4="),
    _row(12, 143_000, 5.16, "C4=CC=CC=C4F"),
    _row(14, 218, 2.34, "C1=NC=C2N1C3)C", search="C1=NC=C2N1C3=C"),
    _row(16, 3_320, 3.52, "NC2)C4=CC=CC=C4F"),
    _row(18, 7, 0.85, "CC1=NC=C2N1C3=C(C="),
)

# Index of the internally inconsistent Midazolam row (size vs log column).
MIDAZOLAM_LOG_MISMATCH_ROW = 2

# Expected trend fits over the recorded log columns, computed beforehand
# with an independent spreadsheet-style least-squares pass.
NELARABINE_FIT = {"slope": -0.359417, "intercept": 8.429722}
MIDAZOLAM_FIT = {"slope": -0.386833, "intercept": 8.883889}
