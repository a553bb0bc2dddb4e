"""Suffix-model learning and candidate derivative generation.

The model is learned from an inflectional lexicon: the stem of a lemma is
the shortest longest-common-prefix between the lemma and any of its
inflected forms, and every vocabulary word contributes the ending left
after stripping its longest matching stem. Endings seen across enough
distinct stems become the suffix inventory. Generation then crosses
candidate stems with the whole inventory, on purpose over-generating;
downstream filters keep only attested, licensed derivatives.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path

from .lexica import LexiconError, normalize

log = logging.getLogger(__name__)

VOWELS = frozenset("aeiouyàâäéèêëíîïóôöùûüÿ")


class TooShortError(ValueError):
    """Lemma is below the syllable floor for derivational generation."""


@dataclass(frozen=True)
class EuphonicRule:
    """Rewrite the stem tail when gluing a suffix on.

    `before` restricts the rule to suffixes starting with a vowel ("vowel")
    or applies it regardless ("any").
    """

    stem_tail: str
    replacement: str
    before: str = "vowel"

    def applies(self, stem: str, suffix: str) -> bool:
        if not suffix or not stem.endswith(self.stem_tail):
            return False
        if self.before == "vowel":
            return suffix[0] in VOWELS
        return True

    def apply(self, stem: str) -> str:
        return stem[: len(stem) - len(self.stem_tail)] + self.replacement


# Final mute e drops before a vowel-initial suffix (coupe + -ure -> coupure).
DEFAULT_EUPHONICS = (EuphonicRule("e", "", "vowel"),)


def load_euphonic_rules(path) -> tuple[EuphonicRule, ...]:
    """Load "stem_tail<TAB>replacement<TAB>before" rows, in file order."""
    rules = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        row = line.split("\t")
        if len(row) != 3:
            raise LexiconError(path, lineno, f"expected 3 columns, got {len(row)}")
        tail, replacement, before = row
        if not tail:
            raise LexiconError(path, lineno, "empty stem tail")
        if before not in ("vowel", "any"):
            raise LexiconError(path, lineno, f"bad 'before' value: {before!r}")
        rules.append(EuphonicRule(tail, replacement, before))
    return tuple(rules)


@dataclass
class SuffixModel:
    """Learned suffix inventory plus the stemming parameters."""

    suffixes: dict[str, int] = field(default_factory=dict)
    min_stem_len: int = 3
    max_stems_per_lemma: int = 2
    min_syllables: int = 3


@dataclass(frozen=True)
class CandidateDerivative:
    source_lemma: str
    stem: str
    suffix: str
    surface: str


def syllable_count(word: str) -> int:
    """Count maximal vowel groups, the working definition of a syllable."""
    count = 0
    in_group = False
    for ch in normalize(word):
        if ch in VOWELS:
            if not in_group:
                count += 1
                in_group = True
        else:
            in_group = False
    return count


def learn_suffix_model(entries, threshold: int, *, min_stem_len: int = 3,
                       max_stems_per_lemma: int = 2, min_syllables: int = 3) -> SuffixModel:
    """Learn a suffix inventory from inflection entries.

    A suffix is retained when it is the residual of vocabulary words over at
    least `threshold` distinct stems; its stored frequency is that stem count.
    """
    stem_by_lemma: dict[str, str] = {}
    for e in entries:
        form, lemma = normalize(e.surface_form), normalize(e.lemma)
        if form == lemma:
            continue
        prefix = _common_prefix(form, lemma)
        if len(prefix) < min_stem_len:
            continue
        best = stem_by_lemma.get(lemma)
        if best is None or len(prefix) < len(best):
            stem_by_lemma[lemma] = prefix
    stems = sorted(set(stem_by_lemma.values()), key=len, reverse=True)

    vocabulary = {normalize(e.surface_form) for e in entries}
    vocabulary.update(normalize(e.lemma) for e in entries)
    stems_per_suffix: dict[str, set[str]] = {}
    for word in vocabulary:
        stem = next((s for s in stems if word.startswith(s) and len(word) > len(s)), None)
        if stem is None:
            continue
        stems_per_suffix.setdefault(word[len(stem):], set()).add(stem)

    suffixes = {
        suffix: len(stem_set)
        for suffix, stem_set in stems_per_suffix.items()
        if len(stem_set) >= threshold
    }
    return SuffixModel(
        suffixes=suffixes,
        min_stem_len=min_stem_len,
        max_stems_per_lemma=max_stems_per_lemma,
        min_syllables=min_syllables,
    )


def stem_candidates(lemma: str, model: SuffixModel) -> list[str]:
    """Plausible derivation stems of a lemma, shortest first.

    The lemma itself always qualifies; so does the lemma minus any known
    suffix, when the remainder is long enough. At most
    `model.max_stems_per_lemma` stems are returned. Lemmas below the
    syllable floor are rejected outright.
    """
    word = normalize(lemma)
    if syllable_count(word) < model.min_syllables:
        raise TooShortError(
            f"lemma too short for derivation: {lemma!r} "
            f"({syllable_count(word)} < {model.min_syllables} syllables)")
    stems = {word}
    for suffix in model.suffixes:
        if word.endswith(suffix) and len(word) - len(suffix) >= model.min_stem_len:
            stems.add(word[: len(word) - len(suffix)])
    ordered = sorted(stems, key=lambda s: (len(s), s))
    return ordered[: model.max_stems_per_lemma]


def euphonic_surfaces(stem: str, suffix: str, rules=DEFAULT_EUPHONICS) -> list[str]:
    """All spellings of stem + suffix: plain gluing plus one per matching rule."""
    surfaces = [stem + suffix]
    for rule in rules:
        if rule.applies(stem, suffix):
            adjusted = rule.apply(stem) + suffix
            if adjusted not in surfaces:
                surfaces.append(adjusted)
    return surfaces


def generate_candidates(lemma: str, model: SuffixModel,
                        euphonics=DEFAULT_EUPHONICS) -> list[CandidateDerivative]:
    """Cross candidate stems with the suffix inventory.

    Every stem is also emitted bare (suffix "") to cover conversion, e.g.
    couper -> coup. Recall is the goal; precision comes from the corpus and
    instruction filters. Duplicate surfaces are dropped, first one wins.
    A candidate's stem is recorded as its surface minus its suffix, so the
    stem stays recoverable even when a euphonic rule reshaped the joint.
    """
    candidates = []
    seen = set()
    for stem in stem_candidates(lemma, model):
        for suffix in [""] + sorted(model.suffixes):
            for surface in euphonic_surfaces(stem, suffix, euphonics):
                if len(surface) < model.min_stem_len + 1 or surface in seen:
                    continue
                seen.add(surface)
                recorded_stem = surface[: len(surface) - len(suffix)] if suffix else surface
                candidates.append(CandidateDerivative(
                    source_lemma=lemma,
                    stem=recorded_stem,
                    suffix=suffix,
                    surface=surface,
                ))
    return candidates


def corpus_filter(candidates, corpus_lexicon) -> list[CandidateDerivative]:
    """Keep only candidates whose surface is attested in the corpus wordlist."""
    return [c for c in candidates if c.surface in corpus_lexicon]


def dump_candidates(candidates, path):
    lines = [f"{c.source_lemma}\t{c.stem}\t{c.suffix}\t{c.surface}" for c in candidates]
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def load_candidates(path) -> list[CandidateDerivative]:
    candidates = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        row = line.split("\t")
        if len(row) != 4:
            raise LexiconError(path, lineno, f"expected 4 columns, got {len(row)}")
        candidates.append(CandidateDerivative(*row))
    return candidates


def _common_prefix(a: str, b: str) -> str:
    i = 0
    limit = min(len(a), len(b))
    while i < limit and a[i] == b[i]:
        i += 1
    return a[:i]
