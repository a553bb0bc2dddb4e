"""Filtering candidate derivatives against per-sense instructions, and the
derivational resource built from the full generate/filter pipeline."""

import copy
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .lexica import (
    LexiconError,
    VERB,
    VERBAL,
    DerivInstruction,
    instructions_for,
    senses_by_lemma,
)
from .morphogen import (
    DEFAULT_EUPHONICS,
    TooShortError,
    corpus_filter,
    generate_candidates,
)

log = logging.getLogger(__name__)

ALL_SENSES = frozenset()


@dataclass(frozen=True)
class DerivativeRecord:
    """An accepted derivative of a dictionary entry.

    `licensed_senses` lists the sense ids whose instructions produced the
    derivative; the empty set means every sense (used when licensing cannot
    discriminate, e.g. resources loaded with a wildcard sense column).
    """

    surface: str
    target_pos: str
    suffix: str
    source_lemma: str
    licensed_senses: frozenset = ALL_SENSES


@dataclass
class ResourceStats:
    entries_processed: int = 0
    candidates_generated: int = 0
    derivatives_accepted: int = 0
    instructions_total: int = 0
    instructions_unmatched: int = 0


@dataclass
class DerivationalResource:
    by_lemma: dict = field(default_factory=dict)
    stats: ResourceStats = field(default_factory=ResourceStats)

    def records_for(self, lemma: str) -> list:
        return self.by_lemma.get(lemma, [])

    def all_records(self) -> list:
        return [r for lemma in sorted(self.by_lemma) for r in self.by_lemma[lemma]]

    def size(self) -> int:
        return sum(len(records) for records in self.by_lemma.values())


def filter_by_instructions(candidates, senses, code_table) -> list[DerivativeRecord]:
    """Keep candidates whose suffix equals the suffix of some instruction.

    All senses must belong to one lemma. Comparison is exact string equality
    on the suffix (euphonic adjustments happened at generation time, the
    candidate already records its effective suffix). The accepted record is
    licensed for every sense carrying a matching instruction and takes its
    part of speech from the first such instruction.
    """
    lemmas = {s.lemma for s in senses}
    if len(lemmas) > 1:
        raise ValueError(f"senses of several lemmas passed together: {sorted(lemmas)}")
    per_sense = [(s, instructions_for(s, code_table)) for s in senses]
    records = []
    for cand in candidates:
        licensed = set()
        target_pos = None
        for sense, instructions in per_sense:
            for ins in instructions:
                if ins.suffix == cand.suffix:
                    licensed.add(sense.sense_id)
                    if target_pos is None:
                        target_pos = ins.target_pos
        if licensed:
            records.append(DerivativeRecord(
                surface=cand.surface,
                target_pos=target_pos,
                suffix=cand.suffix,
                source_lemma=cand.source_lemma,
                licensed_senses=frozenset(licensed),
            ))
    return records


def build_resource(dictionary, model, corpus_lexicon, code_table,
                   euphonics=DEFAULT_EUPHONICS) -> DerivationalResource:
    """Run generate -> corpus filter -> instruction filter for every entry.

    Entries below the model's syllable floor are skipped, with a log line.
    Output order is deterministic: lemmas sorted, records sorted by surface.
    """
    stats = ResourceStats()
    by_lemma = {}
    index = senses_by_lemma(dictionary)
    for lemma in sorted(index):
        senses = index[lemma]
        stats.entries_processed += len(senses)
        instruction_lists = [instructions_for(s, code_table) for s in senses]
        stats.instructions_total += sum(len(ins) for ins in instruction_lists)
        try:
            candidates = generate_candidates(lemma, model, euphonics)
        except TooShortError as exc:
            log.info("skipping %s: %s", lemma, exc)
            stats.instructions_unmatched += sum(len(ins) for ins in instruction_lists)
            continue
        stats.candidates_generated += len(candidates)
        attested = corpus_filter(candidates, corpus_lexicon)
        records = filter_by_instructions(attested, senses, code_table)
        # Collapse duplicate surfaces (euphonic variants can tie), keep first.
        unique = {}
        for r in records:
            unique.setdefault(r.surface, r)
        records = sorted(unique.values(), key=lambda r: r.surface)
        if records:
            by_lemma[lemma] = records
        stats.derivatives_accepted += len(records)
        matched_suffixes = {r.suffix for r in records}
        for instructions in instruction_lists:
            stats.instructions_unmatched += sum(
                1 for ins in instructions if ins.suffix not in matched_suffixes)
    return DerivationalResource(by_lemma=by_lemma, stats=stats)


def symmetrize_instructions(dictionary, resource, code_table) -> list:
    """Give noun/adjective entries a back-instruction to their source verb.

    For every verbal sense whose instruction produced a derivative D found in
    the resource, every dictionary sense of D in the same domain gains a
    VERBAL instruction rebuilding the verb (suffix = verb ending after the
    common prefix of D and the verb). Returns a deep copy; input untouched.
    """
    augmented = copy.deepcopy(dictionary)
    index = senses_by_lemma(augmented)
    added = 0
    for sense in [s for s in augmented if s.pos == VERB]:
        instructions = instructions_for(sense, code_table)
        produced = {
            r.surface: r
            for r in resource.records_for(sense.lemma)
            if sense.sense_id in r.licensed_senses or not r.licensed_senses
        }
        for ins in instructions:
            for surface, record in sorted(produced.items()):
                if record.suffix != ins.suffix:
                    continue
                for target in index.get(surface, []):
                    if target.pos == VERB or target.domain_code != sense.domain_code:
                        continue
                    shared = _common_prefix_len(surface, sense.lemma)
                    verb_suffix = sense.lemma[shared:]
                    if not verb_suffix:
                        continue
                    back = DerivInstruction(VERB, verb_suffix, VERBAL)
                    if back not in target.extra_instructions:
                        target.extra_instructions.append(back)
                        added += 1
    log.info("symmetrize: added %d back-instructions", added)
    return augmented


def audit_precision(resource, sample_size: int, gold: dict, seed: int = 17) -> Fraction:
    """Fraction of correct derivatives in a seeded uniform sample.

    `gold` maps derivative surfaces to booleans and must cover the sample.
    A sample size beyond the resource is clamped with a warning.
    """
    records = resource.all_records()
    if not records:
        raise ValueError("cannot audit an empty resource")
    if sample_size > len(records):
        log.warning("sample size %d clamped to resource size %d", sample_size, len(records))
        sample_size = len(records)
    rng = random.Random(seed)
    sample = rng.sample(records, sample_size)
    missing = [r.surface for r in sample if r.surface not in gold]
    if missing:
        raise ValueError(f"gold verdicts missing for sampled surfaces: {sorted(set(missing))}")
    correct = sum(1 for r in sample if gold[r.surface])
    return Fraction(correct, sample_size)


def save_resource(resource, path):
    """Write "source_lemma<TAB>surface<TAB>pos<TAB>suffix<TAB>senses" rows.

    The sense column is ","-joined ids, or "*" for all-senses records.
    Output is byte-stable for a given resource.
    """
    lines = []
    for record in resource.all_records():
        senses = "*" if not record.licensed_senses else ",".join(
            str(s) for s in sorted(record.licensed_senses))
        lines.append("\t".join([
            record.source_lemma, record.surface, record.target_pos,
            record.suffix, senses,
        ]))
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def load_resource(path) -> DerivationalResource:
    by_lemma = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        row = line.split("\t")
        if len(row) != 5:
            raise LexiconError(path, lineno, f"expected 5 columns, got {len(row)}")
        source_lemma, surface, pos, suffix, senses = row
        if senses == "*":
            licensed = ALL_SENSES
        else:
            try:
                licensed = frozenset(int(s) for s in senses.split(","))
            except ValueError:
                raise LexiconError(path, lineno, f"bad sense list: {senses!r}")
        record = DerivativeRecord(surface, pos, suffix, source_lemma, licensed)
        group = by_lemma.setdefault(source_lemma, [])
        if any(r.surface == surface for r in group):
            raise LexiconError(path, lineno, f"duplicate derivative {source_lemma} -> {surface}")
        group.append(record)
    for group in by_lemma.values():
        group.sort(key=lambda r: r.surface)
    resource = DerivationalResource(by_lemma=by_lemma)
    resource.stats.derivatives_accepted = resource.size()
    return resource


def _common_prefix_len(a: str, b: str) -> int:
    i = 0
    limit = min(len(a), len(b))
    while i < limit and a[i] == b[i]:
        i += 1
    return i
