"""Compact drug-lead ontologies.

Three levels only: a root drug class (say "Chemotherapy"), drug instances
under it, and per-drug components.  A component is either a linearized
SMILES fragment (the searchable part), a conventional name, or the
``skeleton`` placeholder marking that the explicit components do not cover
the whole molecule.  Ontologies are values: every operation returns an
updated copy.

On disk an ontology is a versioned JSON document::

    {
      "format_version": 1,
      "root_class": "Chemotherapy",
      "drugs": [
        {
          "name": "Nelarabine",
          "full_smiles": "COC1=...",          # optional
          "components": [
            {"kind": "fragment", "text": "(N)=NC2=C1N=CN2C"},
            {"kind": "named", "label": "Component-A"},
            {"kind": "skeleton"}
          ]
        }
      ]
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Union

from fraglead.errors import (
    DuplicateDrug,
    DuplicateSkeleton,
    InvalidSmiles,
    MalformedFile,
    SmilesError,
    UnknownDrug,
)
from fraglead.smiles import tokenize

FORMAT_VERSION = 1


@dataclass(frozen=True)
class FragmentComponent:
    """A linearized sub-string of the drug's structure; used as a search input."""

    text: str

    def __post_init__(self):
        if not self.text:
            raise ValueError("fragment component text must be non-empty")


@dataclass(frozen=True)
class NamedComponent:
    """A conventionally named component; an opaque label, never searched."""

    label: str


@dataclass(frozen=True)
class Skeleton:
    """Placeholder: the explicit components do not cover the whole molecule."""


Component = Union[FragmentComponent, NamedComponent, Skeleton]


@dataclass(frozen=True)
class DrugEntry:
    name: str
    full_smiles: str | None = None
    components: tuple[Component, ...] = ()


@dataclass(frozen=True)
class DrugLeadOntology:
    root_class: str
    drugs: tuple[DrugEntry, ...] = ()

    def drug(self, name: str) -> DrugEntry:
        for entry in self.drugs:
            if entry.name == name:
                return entry
        raise UnknownDrug(f"no drug named {name!r}")


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[str, ...]
    warnings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.errors


def add_drug(onto: DrugLeadOntology, name: str,
             full_smiles: str | None = None) -> DrugLeadOntology:
    """Append a drug with an empty component list."""
    if any(d.name == name for d in onto.drugs):
        raise DuplicateDrug(f"drug {name!r} already present")
    if full_smiles is not None:
        try:
            tokenize(full_smiles)
        except SmilesError as exc:
            raise InvalidSmiles(f"full_smiles for {name!r}: {exc}") from exc
    return replace(onto, drugs=onto.drugs + (DrugEntry(name, full_smiles),))


def add_component(onto: DrugLeadOntology, drug: str,
                  component: Component) -> DrugLeadOntology:
    """Append a component to an existing drug (at most one skeleton each)."""
    entry = onto.drug(drug)
    if isinstance(component, Skeleton) and any(
        isinstance(c, Skeleton) for c in entry.components
    ):
        raise DuplicateSkeleton(f"drug {drug!r} already has a skeleton")
    updated = replace(entry, components=entry.components + (component,))
    drugs = tuple(updated if d.name == drug else d for d in onto.drugs)
    return replace(onto, drugs=drugs)


def _covered_positions(full: str, fragments: list[str]) -> set[int]:
    covered: set[int] = set()
    for text in fragments:
        start = full.find(text)
        while start != -1:
            covered.update(range(start, start + len(text)))
            start = full.find(text, start + 1)
    return covered


def validate(onto: DrugLeadOntology) -> ValidationReport:
    """Check structure (errors) and content plausibility (warnings).

    Warnings flag fragments that are not substrings of the stored full
    structure, and drugs whose fragments fail to cover the whole structure
    without a skeleton saying so.
    """
    errors: list[str] = []
    warnings: list[str] = []

    if not onto.root_class:
        errors.append("root class name is empty")
    seen: set[str] = set()
    for entry in onto.drugs:
        if not entry.name:
            errors.append("a drug has an empty name")
            continue
        if entry.name in seen:
            errors.append(f"duplicate drug name {entry.name!r}")
        seen.add(entry.name)

        skeletons = 0
        fragments: list[str] = []
        for component in entry.components:
            if isinstance(component, FragmentComponent):
                if not component.text:
                    errors.append(f"{entry.name}: empty fragment component")
                else:
                    fragments.append(component.text)
            elif isinstance(component, NamedComponent):
                if not component.label:
                    errors.append(f"{entry.name}: empty named component")
            else:
                skeletons += 1
        if skeletons > 1:
            errors.append(f"{entry.name}: more than one skeleton")

        if entry.full_smiles is not None:
            for text in fragments:
                if text not in entry.full_smiles:
                    warnings.append(
                        f"{entry.name}: fragment {text!r} is not a substring "
                        f"of the stored structure"
                    )
            covered = _covered_positions(entry.full_smiles, fragments)
            if skeletons == 0 and len(covered) < len(entry.full_smiles):
                warnings.append(
                    f"{entry.name}: components do not cover the whole "
                    f"structure and no skeleton is declared"
                )
    return ValidationReport(tuple(errors), tuple(warnings))


def search_inputs(onto: DrugLeadOntology,
                  drug: str | None = None) -> list[tuple[str, str]]:
    """(drug name, fragment text) pairs in insertion order.

    Named components and skeletons are excluded — only fragments are
    search queries.
    """
    entries = [onto.drug(drug)] if drug is not None else list(onto.drugs)
    pairs = []
    for entry in entries:
        for component in entry.components:
            if isinstance(component, FragmentComponent):
                pairs.append((entry.name, component.text))
    return pairs


def _component_to_json(component: Component) -> dict:
    if isinstance(component, FragmentComponent):
        return {"kind": "fragment", "text": component.text}
    if isinstance(component, NamedComponent):
        return {"kind": "named", "label": component.label}
    return {"kind": "skeleton"}


def save(onto: DrugLeadOntology) -> bytes:
    """Serialize to the versioned JSON format (UTF-8 bytes)."""
    drugs = []
    for entry in onto.drugs:
        record: dict = {"name": entry.name}
        if entry.full_smiles is not None:
            record["full_smiles"] = entry.full_smiles
        record["components"] = [_component_to_json(c) for c in entry.components]
        drugs.append(record)
    payload = {
        "format_version": FORMAT_VERSION,
        "root_class": onto.root_class,
        "drugs": drugs,
    }
    return (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _require(condition: bool, reason: str):
    if not condition:
        raise MalformedFile(reason)


def load(data: bytes | str) -> DrugLeadOntology:
    """Parse the JSON format back into an ontology.

    Raises :class:`~fraglead.errors.MalformedFile` with a character
    position for JSON syntax errors and with a descriptive reason for
    schema violations (unknown component kinds are named).
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFile(exc.msg, position=exc.pos) from exc

    _require(isinstance(raw, dict), "top level is not an object")
    version = raw.get("format_version")
    _require(version == FORMAT_VERSION, f"unsupported format_version {version!r}")
    root = raw.get("root_class")
    _require(isinstance(root, str) and bool(root), "root_class missing or empty")
    raw_drugs = raw.get("drugs", [])
    _require(isinstance(raw_drugs, list), "drugs is not a list")

    drugs: list[DrugEntry] = []
    names: set[str] = set()
    for position, record in enumerate(raw_drugs):
        _require(isinstance(record, dict), f"drug #{position} is not an object")
        name = record.get("name")
        _require(isinstance(name, str) and bool(name), f"drug #{position} has no name")
        _require(name not in names, f"duplicate drug name {name!r}")
        names.add(name)
        full_smiles = record.get("full_smiles")
        if full_smiles is not None:
            _require(isinstance(full_smiles, str), f"{name}: full_smiles is not a string")
            try:
                tokenize(full_smiles)
            except SmilesError as exc:
                raise MalformedFile(f"{name}: full_smiles does not tokenize: {exc}") from exc
        raw_components = record.get("components", [])
        _require(isinstance(raw_components, list), f"{name}: components is not a list")
        components: list[Component] = []
        skeletons = 0
        for item in raw_components:
            _require(isinstance(item, dict), f"{name}: component is not an object")
            kind = item.get("kind")
            if kind == "fragment":
                fragment_text = item.get("text")
                _require(
                    isinstance(fragment_text, str) and bool(fragment_text),
                    f"{name}: fragment component without text",
                )
                components.append(FragmentComponent(fragment_text))
            elif kind == "named":
                label = item.get("label")
                _require(isinstance(label, str), f"{name}: named component without label")
                components.append(NamedComponent(label))
            elif kind == "skeleton":
                skeletons += 1
                _require(skeletons <= 1, f"{name}: more than one skeleton")
                components.append(Skeleton())
            else:
                raise MalformedFile(f"{name}: unknown component kind {kind!r}")
        drugs.append(DrugEntry(name, full_smiles, tuple(components)))
    return DrugLeadOntology(root, tuple(drugs))
