"""Concept vectors and match-count word selection.

A concept vector assigns TRUE / FALSE / DON'T-CARE to a fixed schema of
attributes.  Word selection scores a context vector against each candidate
word's vector by counting compatible cells; DON'T CARE is compatible with
everything.  The same machinery drives the modal-verb crossbar table and
translation lexicons.

Table file format (UTF-8, ``#`` comments): a header line of comma-separated
attribute names, then one row per entry::

    <word>|<meaning>|T,F,DC,...

cells in header order.  Modal tables additionally use ``(T)`` for implied
(parenthesized) cells, which show in icons but never count toward scores.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from pathlib import Path

from .model import SwirlyArrayPayload

__all__ = [
    "Cell",
    "ConceptVector",
    "SchemaMismatch",
    "match_count",
    "RankedWord",
    "Lexicon",
    "EmptyLexicon",
    "select_word",
    "MODAL_CONCEPTS",
    "MODAL_VERBS",
    "ModalRow",
    "ModalTable",
    "UnknownModalRow",
    "ModalConcepts",
    "modal_concepts",
    "modal_icon",
    "ATTITUDE_CATALOG",
    "CORE_ATTITUDES",
    "attitude_category",
    "TableFormatError",
    "TableRow",
    "TableData",
    "load_table_text",
    "load_table",
    "tables_dir",
    "load_default_modal_table",
]


class SchemaMismatch(ValueError):
    pass


class EmptyLexicon(ValueError):
    pass


class UnknownModalRow(KeyError):
    pass


class TableFormatError(ValueError):
    pass


class Cell(str, enum.Enum):
    T = "T"
    F = "F"
    DC = "DC"


@dataclass(frozen=True)
class ConceptVector:
    attributes: tuple[str, ...]
    cells: tuple[Cell, ...]

    def __post_init__(self):
        if len(self.attributes) != len(self.cells):
            raise SchemaMismatch("one cell per attribute required")
        if len(set(self.attributes)) != len(self.attributes):
            raise SchemaMismatch("attribute names must be unique")

    def get(self, name: str) -> Cell:
        return self.cells[self.attributes.index(name)]

    def with_cell(self, name: str, cell: Cell) -> "ConceptVector":
        i = self.attributes.index(name)
        return ConceptVector(self.attributes, self.cells[:i] + (cell,) + self.cells[i + 1 :])


def _compatible(a: Cell, b: Cell) -> bool:
    return a is Cell.DC or b is Cell.DC or a is b


def match_count(context: ConceptVector, candidate: ConceptVector) -> int:
    """Count of attribute cells where the two vectors are compatible."""
    if context.attributes != candidate.attributes:
        raise SchemaMismatch(
            f"schemas differ: {context.attributes} vs {candidate.attributes}"
        )
    return sum(1 for a, b in zip(context.cells, candidate.cells) if _compatible(a, b))


@dataclass(frozen=True)
class RankedWord:
    word: str
    count: int
    rank: int
    tied: bool


@dataclass
class Lexicon:
    language: str
    entries: dict[str, ConceptVector] = field(default_factory=dict)
    glosses: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        schemas = {v.attributes for v in self.entries.values()}
        if len(schemas) > 1:
            raise SchemaMismatch("all lexicon entries must share one schema")

    @classmethod
    def from_table(cls, table: "TableData", language: str = "") -> "Lexicon":
        lex = cls(language)
        for row in table.rows:
            cells = tuple(_plain_cell(c) for c in row.cells)
            lex.entries[row.word] = ConceptVector(table.attributes, cells)
            if row.meaning:
                lex.glosses[row.word] = row.meaning
        return lex


def select_word(context: ConceptVector, lexicon: Lexicon) -> list[RankedWord]:
    """Candidates ranked by descending match count.

    Equal counts share a rank and are flagged as tied; the secondary order
    is lexicographic so output never depends on insertion order.
    """
    if not lexicon.entries:
        raise EmptyLexicon(lexicon.language or "<lexicon>")
    scored = sorted(
        ((word, match_count(context, vec)) for word, vec in lexicon.entries.items()),
        key=lambda wc: (-wc[1], wc[0]),
    )
    count_freq: dict[int, int] = {}
    for _, count in scored:
        count_freq[count] = count_freq.get(count, 0) + 1
    out = []
    for word, count in scored:
        rank = 1 + sum(1 for _, c in scored if c > count)
        out.append(RankedWord(word, count, rank, count_freq[count] > 1))
    return out


# --------------------------------------------------------------------------
# Modal verbs.

MODAL_CONCEPTS = (
    "Ability",
    "Advice",
    "Formal Directive",
    "Formality",
    "Habit",
    "Ideal",
    "Intention",
    "Likelihood",
    "Obligation",
    "Offer",
    "Permission",
    "Possibility",
    "Prediction",
    "Request",
    "Suggestion",
    "Tense",
    "Willpower",
)

MODAL_VERBS = (
    "be able to",
    "can",
    "could",
    "had best",
    "had better",
    "have got to",
    "have to",
    "may",
    "might",
    "must",
    "needn't",
    "ought to",
    "shall",
    "should",
    "will",
    "would",
)


@dataclass(frozen=True)
class ModalRow:
    verb: str
    meaning: str
    active: frozenset[str]
    implied: frozenset[str]


@dataclass(frozen=True)
class ModalConcepts:
    active: frozenset[str]
    implied: frozenset[str]


@dataclass
class ModalTable:
    rows: dict[tuple[str, str], ModalRow] = field(default_factory=dict)

    def __post_init__(self):
        verbs = {verb for verb, _ in self.rows}
        missing = set(MODAL_VERBS) - verbs
        if missing:
            raise TableFormatError(f"modal table missing verbs: {sorted(missing)}")
        for row in self.rows.values():
            stray = (row.active | row.implied) - set(MODAL_CONCEPTS)
            if stray:
                raise TableFormatError(f"unknown modal concepts: {sorted(stray)}")

    @classmethod
    def from_table(cls, table: "TableData") -> "ModalTable":
        stray = set(table.attributes) - set(MODAL_CONCEPTS)
        if stray:
            raise TableFormatError(f"unknown modal concept columns: {sorted(stray)}")
        rows = {}
        for row in table.rows:
            active, implied = set(), set()
            for name, cell in zip(table.attributes, row.cells):
                if cell == "T":
                    active.add(name)
                elif cell == "(T)":
                    implied.add(name)
                elif cell != "F":
                    raise TableFormatError(
                        f"modal cell must be T, F, or (T); got {cell!r}"
                    )
            key = (row.word, row.meaning)
            if key in rows:
                raise TableFormatError(f"duplicate modal row {key}")
            rows[key] = ModalRow(row.word, row.meaning, frozenset(active), frozenset(implied))
        return cls(rows)


def modal_concepts(table: ModalTable, verb: str, meaning: str) -> ModalConcepts:
    """Concepts a modal verb-with-meaning switches on.

    Implied (parenthesized) concepts come back separately: they display but
    do not score.
    """
    try:
        row = table.rows[(verb, meaning)]
    except KeyError:
        raise UnknownModalRow(f"{verb} ({meaning})") from None
    return ModalConcepts(row.active, row.implied)


def _icon_cells() -> tuple[tuple[str, float, float], ...]:
    # Pegboard skeleton shared by every modal verb: 6 cells per row.
    return tuple(
        (name, float((i % 6) * 26), float((i // 6) * 26))
        for i, name in enumerate(MODAL_CONCEPTS)
    )


def modal_icon(table: ModalTable, verb: str, meaning: str) -> SwirlyArrayPayload:
    """Swirly-array icon for a modal verb: fixed cell skeleton, with the
    verb's concepts (implied ones included, for display) lit up."""
    concepts = modal_concepts(table, verb, meaning)
    return SwirlyArrayPayload(
        cells=_icon_cells(),
        active=frozenset(concepts.active | concepts.implied),
        label=f"{verb} ({meaning})",
    )


# --------------------------------------------------------------------------
# Propositional attitudes.

ATTITUDE_CATALOG: dict[str, frozenset[str]] = {
    "emotional motivation": frozenset({"fear", "hope"}),
    "general motivation": frozenset({"desire", "intend", "want", "wish"}),
    "cognitive": frozenset(
        {"believe", "consider", "deny", "doubt", "imagine", "judge", "know", "perceive"}
    ),
    "communication": frozenset({"assert", "inform"}),
    "grammatical": frozenset({"command"}),
}

CORE_ATTITUDES = frozenset(
    {
        "assert",
        "believe",
        "command",
        "consider",
        "deny",
        "desire",
        "doubt",
        "fear",
        "hope",
        "imagine",
        "intend",
        "judge",
        "know",
        "perceive",
        "want",
        "wish",
    }
)


def attitude_category(name: str) -> str:
    for category, names in ATTITUDE_CATALOG.items():
        if name in names:
            return category
    raise KeyError(name)


# --------------------------------------------------------------------------
# Table files.

_CELL_TOKENS = {"T", "F", "DC", "(T)"}


@dataclass(frozen=True)
class TableRow:
    word: str
    meaning: str
    cells: tuple[str, ...]


@dataclass(frozen=True)
class TableData:
    attributes: tuple[str, ...]
    rows: tuple[TableRow, ...]


def load_table_text(text: str) -> TableData:
    attributes: tuple[str, ...] | None = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if attributes is None:
            attributes = tuple(a.strip() for a in line.split(","))
            if any(not a for a in attributes):
                raise TableFormatError(f"line {lineno}: empty attribute name")
            continue
        parts = line.split("|")
        if len(parts) != 3:
            raise TableFormatError(f"line {lineno}: expected word|meaning|cells")
        word, meaning, cell_text = (p.strip() for p in parts)
        cells = tuple(c.strip() for c in cell_text.split(","))
        if len(cells) != len(attributes):
            raise TableFormatError(
                f"line {lineno}: {len(cells)} cells for {len(attributes)} attributes"
            )
        bad = [c for c in cells if c not in _CELL_TOKENS]
        if bad:
            raise TableFormatError(f"line {lineno}: bad cells {bad}")
        rows.append(TableRow(word, meaning, cells))
    if attributes is None:
        raise TableFormatError("no header line")
    return TableData(attributes, tuple(rows))


def load_table(path: str | Path) -> TableData:
    return load_table_text(Path(path).read_text(encoding="utf-8"))


def _plain_cell(token: str) -> Cell:
    if token == "(T)":
        raise TableFormatError("implied (T) cells belong to modal tables only")
    return Cell(token)


def tables_dir() -> Path:
    """Directory holding the shipped data tables; TUMBUG_TABLES overrides."""
    override = os.environ.get("TUMBUG_TABLES")
    if override:
        return Path(override)
    return Path(__file__).parent / "data"


def load_default_modal_table() -> ModalTable:
    return ModalTable.from_table(load_table(tables_dir() / "modal_verbs.tbl"))
