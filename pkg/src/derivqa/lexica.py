"""Lexical resources: sense dictionary, inflection lexicon, corpus wordlist,
synonym table and the derivation code table.

All resources are tab-separated text so they can be maintained by hand.
Loaders validate eagerly and report the offending line; serializers write
a canonical form so that load -> save -> load is the identity.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path

log = logging.getLogger(__name__)

NOUN = "NOUN"
VERB = "VERB"
ADJ = "ADJ"
ADV = "ADV"
CONTENT_POS = frozenset({NOUN, VERB, ADJ, ADV})

# Kinds of derivational instruction, and the target part of speech each implies.
NOMINAL = "NOMINAL"
VERBAL_ADJECTIVE = "VERBAL_ADJECTIVE"
ADVERBIAL = "ADVERBIAL"
VERBAL = "VERBAL"
KIND_TARGET_POS = {
    NOMINAL: NOUN,
    VERBAL_ADJECTIVE: ADJ,
    ADVERBIAL: ADV,
    VERBAL: VERB,
}

WILDCARD_SENSE = "*"


def normalize(form: str) -> str:
    """Case-fold a surface form. Diacritics are significant and kept."""
    return form.lower()


class LexiconError(ValueError):
    """A resource file failed validation."""

    def __init__(self, path, lineno: int, message: str):
        self.path = str(path)
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: {message}")


@dataclass(frozen=True)
class DerivInstruction:
    """One derivational instruction: attach `suffix` to build a `target_pos` word."""

    target_pos: str
    suffix: str
    kind: str
    code_letter: str | None = None

    def __post_init__(self):
        if self.kind not in KIND_TARGET_POS:
            raise ValueError(f"unknown instruction kind: {self.kind!r}")
        if KIND_TARGET_POS[self.kind] != self.target_pos:
            raise ValueError(
                f"kind {self.kind} implies {KIND_TARGET_POS[self.kind]}, got {self.target_pos}"
            )
        if not self.suffix:
            raise ValueError("instruction suffix must be nonempty")


@dataclass
class SenseRecord:
    """One sense of a dictionary entry.

    `deriv_codes` is the raw positional code string from the dictionary;
    parse it with `parse_derivation_codes`. `extra_instructions` holds
    instructions added programmatically (e.g. symmetrized back-instructions)
    that have no code letter of their own.
    """

    lemma: str
    sense_id: int
    pos: str
    domain_code: str = ""
    class_code: str = ""
    operator: str = ""
    gloss: str = ""
    examples: tuple[str, ...] = ()
    conjugation_code: str = ""
    construction_codes: tuple[str, ...] = ()
    deriv_codes: str = ""
    register_level: int | None = None
    extra_instructions: list[DerivInstruction] = field(default_factory=list)

    def __post_init__(self):
        if self.pos not in CONTENT_POS:
            raise ValueError(f"{self.lemma}: bad pos {self.pos!r}")
        if self.sense_id < 1:
            raise ValueError(f"{self.lemma}: sense_id must be >= 1")
        if self.pos == VERB:
            if not self.conjugation_code:
                raise ValueError(f"{self.lemma}/{self.sense_id}: verb sense needs a conjugation code")
        else:
            if self.conjugation_code or self.construction_codes:
                raise ValueError(
                    f"{self.lemma}/{self.sense_id}: conjugation/construction codes are verb-only"
                )


DICT_COLUMNS = 12


def load_dictionary(path) -> list[SenseRecord]:
    """Load sense records from a 12-column TSV file.

    Columns: lemma, sense_id, pos, domain, class, operator, gloss,
    examples (;-separated), conjugation, constructions (;-separated),
    deriv_codes, level. Files for different parts of speech may be loaded
    separately and concatenated by the caller.
    """
    records = []
    seen = set()
    for lineno, row in _read_rows(path):
        if len(row) != DICT_COLUMNS:
            raise LexiconError(path, lineno, f"expected {DICT_COLUMNS} columns, got {len(row)}")
        (lemma, sense_id, pos, domain, class_code, operator, gloss,
         examples, conjugation, constructions, deriv_codes, level) = row
        try:
            sense_num = int(sense_id)
        except ValueError:
            raise LexiconError(path, lineno, f"sense_id is not an integer: {sense_id!r}")
        key = (lemma, sense_num)
        if key in seen:
            raise LexiconError(path, lineno, f"duplicate sense {lemma}/{sense_num}")
        seen.add(key)
        try:
            rec = SenseRecord(
                lemma=lemma,
                sense_id=sense_num,
                pos=pos,
                domain_code=domain,
                class_code=class_code,
                operator=operator,
                gloss=gloss,
                examples=_split_multi(examples),
                conjugation_code=conjugation,
                construction_codes=_split_multi(constructions),
                deriv_codes=deriv_codes,
                register_level=int(level) if level else None,
            )
        except ValueError as exc:
            raise LexiconError(path, lineno, str(exc))
        records.append(rec)
    return records


def save_dictionary(records, path):
    lines = []
    for r in records:
        lines.append("\t".join([
            r.lemma,
            str(r.sense_id),
            r.pos,
            r.domain_code,
            r.class_code,
            r.operator,
            r.gloss,
            ";".join(r.examples),
            r.conjugation_code,
            ";".join(r.construction_codes),
            r.deriv_codes,
            "" if r.register_level is None else str(r.register_level),
        ]))
    _write_lines(path, lines)


def merge_dictionaries(*record_lists) -> list[SenseRecord]:
    """Concatenate per-pos dictionary files, rejecting duplicate senses."""
    merged = []
    seen = set()
    for records in record_lists:
        for r in records:
            key = (r.lemma, r.sense_id)
            if key in seen:
                raise ValueError(f"duplicate sense across files: {r.lemma}/{r.sense_id}")
            seen.add(key)
            merged.append(r)
    return merged


def senses_by_lemma(records) -> dict[str, list[SenseRecord]]:
    index: dict[str, list[SenseRecord]] = {}
    for r in records:
        index.setdefault(r.lemma, []).append(r)
    for group in index.values():
        group.sort(key=lambda r: r.sense_id)
    return index


def load_code_table(path) -> dict[str, DerivInstruction]:
    """Load the code-letter table: code_letter, kind, target_pos, suffix."""
    table = {}
    for lineno, row in _read_rows(path):
        if len(row) != 4:
            raise LexiconError(path, lineno, f"expected 4 columns, got {len(row)}")
        letter, kind, target_pos, suffix = row
        if len(letter) != 1:
            raise LexiconError(path, lineno, f"code letter must be a single character: {letter!r}")
        if letter in table:
            raise LexiconError(path, lineno, f"duplicate code letter {letter!r}")
        try:
            table[letter] = DerivInstruction(target_pos, suffix, kind, code_letter=letter)
        except ValueError as exc:
            raise LexiconError(path, lineno, str(exc))
    return table


def parse_derivation_codes(raw: str, code_table, diagnostics: list | None = None) -> list[DerivInstruction]:
    """Resolve a positional code string like "-Q- - - RB- - -" to instructions.

    Alphanumeric characters are code letters, everything else is filler.
    Letters missing from the table are reported as warnings (collected in
    `diagnostics` when given), never errors: the historical code inventory
    is larger than any one table.
    """
    instructions = []
    for ch in raw:
        if not ch.isalnum():
            continue
        hit = code_table.get(ch)
        if hit is None:
            message = f"unknown derivation code {ch!r} in {raw!r}"
            log.warning(message)
            if diagnostics is not None:
                diagnostics.append(message)
            continue
        instructions.append(hit)
    return instructions


def instructions_for(sense: SenseRecord, code_table, diagnostics: list | None = None) -> list[DerivInstruction]:
    """All instructions of a sense: parsed codes plus programmatic extras."""
    parsed = parse_derivation_codes(sense.deriv_codes, code_table, diagnostics)
    return parsed + list(sense.extra_instructions)


@dataclass(frozen=True)
class InflectionEntry:
    surface_form: str
    lemma: str
    morph_tags: str


class InflectionLexicon:
    """Surface form -> readings multimap over inflection entries."""

    def __init__(self, entries):
        self.entries = list(entries)
        self._by_form: dict[str, list[InflectionEntry]] = {}
        for e in self.entries:
            self._by_form.setdefault(normalize(e.surface_form), []).append(e)

    def readings(self, surface: str) -> list[InflectionEntry]:
        return self._by_form.get(normalize(surface), [])

    def __contains__(self, surface: str) -> bool:
        return normalize(surface) in self._by_form

    def __len__(self):
        return len(self.entries)


def load_inflections(path) -> list[InflectionEntry]:
    """Load "form<TAB>lemma<TAB>tags" lines."""
    entries = []
    for lineno, row in _read_rows(path):
        if len(row) != 3:
            raise LexiconError(path, lineno, f"expected 3 columns, got {len(row)}")
        form, lemma, tags = row
        if not form or not lemma:
            raise LexiconError(path, lineno, "empty form or lemma")
        entries.append(InflectionEntry(form, lemma, tags))
    return entries


def save_inflections(entries, path):
    _write_lines(path, ["\t".join([e.surface_form, e.lemma, e.morph_tags]) for e in entries])


class CorpusLexicon:
    """Attested wordlist with frequencies; membership is case-insensitive."""

    def __init__(self, counts: dict[str, int]):
        self.counts = {normalize(k): v for k, v in counts.items()}

    def __contains__(self, form: str) -> bool:
        return normalize(form) in self.counts

    def count(self, form: str) -> int:
        return self.counts.get(normalize(form), 0)

    def __len__(self):
        return len(self.counts)


def load_corpus_lexicon(path) -> CorpusLexicon:
    counts = {}
    for lineno, row in _read_rows(path):
        if len(row) != 2:
            raise LexiconError(path, lineno, f"expected 2 columns, got {len(row)}")
        form, count = row
        try:
            n = int(count)
        except ValueError:
            raise LexiconError(path, lineno, f"count is not an integer: {count!r}")
        if n < 1:
            raise LexiconError(path, lineno, f"count must be positive: {n}")
        key = normalize(form)
        counts[key] = counts.get(key, 0) + n
    return CorpusLexicon(counts)


def save_corpus_lexicon(lex: CorpusLexicon, path):
    _write_lines(path, [f"{form}\t{count}" for form, count in sorted(lex.counts.items())])


class SynonymTable:
    """(lemma, sense or wildcard) -> synonym lemmas.

    Wildcard rows apply to every sense of the lemma; sense rows additionally
    apply when the token carries that sense.
    """

    def __init__(self, entries: dict[tuple[str, int | str], set[str]]):
        self.entries = entries

    def lookup(self, lemma: str, sense_id: int | None) -> set[str]:
        result = set(self.entries.get((lemma, WILDCARD_SENSE), ()))
        if sense_id is not None:
            result |= self.entries.get((lemma, sense_id), set())
        return result

    def __len__(self):
        return len(self.entries)


def load_synonyms(path, pos_of=None) -> SynonymTable:
    """Load "lemma<TAB>sense-or-*<TAB>syn(;syn)*" rows.

    `pos_of`, when given, maps a lemma to its part of speech (or None for
    unknown); rows pairing words of different known pos are rejected, since
    synonymy never crosses part of speech here.
    """
    entries: dict[tuple[str, int | str], set[str]] = {}
    for lineno, row in _read_rows(path):
        if len(row) != 3:
            raise LexiconError(path, lineno, f"expected 3 columns, got {len(row)}")
        lemma, sense, syns = row
        key_sense: int | str
        if sense == WILDCARD_SENSE:
            key_sense = WILDCARD_SENSE
        else:
            try:
                key_sense = int(sense)
            except ValueError:
                raise LexiconError(path, lineno, f"sense must be an integer or '*': {sense!r}")
        synonyms = _split_multi(syns)
        if not synonyms:
            raise LexiconError(path, lineno, "empty synonym list")
        for syn in synonyms:
            if syn == lemma:
                raise LexiconError(path, lineno, f"synonym equals its head lemma: {lemma!r}")
            if pos_of is not None:
                head_pos, syn_pos = pos_of(lemma), pos_of(syn)
                if head_pos and syn_pos and head_pos != syn_pos:
                    raise LexiconError(
                        path, lineno,
                        f"pos mismatch: {lemma} is {head_pos}, {syn} is {syn_pos}")
        entries.setdefault((lemma, key_sense), set()).update(synonyms)
    return SynonymTable(entries)


def save_synonyms(table: SynonymTable, path):
    lines = []
    for (lemma, sense), syns in sorted(table.entries.items(), key=lambda kv: (kv[0][0], str(kv[0][1]))):
        lines.append(f"{lemma}\t{sense}\t{';'.join(sorted(syns))}")
    _write_lines(path, lines)


def _split_multi(cell: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in cell.split(";") if part.strip())


def _read_rows(path):
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield lineno, line.split("\t")


def _write_lines(path, lines):
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
