"""Simulated rephrasing: synonym alternates and derivation patterns.

A derivation pattern rewrites the dependency neighborhood of a pivot word
into the dependencies its rephrasing with a derivative would carry; the
rephrased sentence itself is never generated. Synonym enrichment attaches
alternate lemmas to tokens so that matching can treat "empereur" and
"chef" disjunctively. Both enrichments are additive: BASE dependencies are
never removed or altered.

Pattern files are declarative blocks:

    PATTERN v2n_eur_svo
    PIVOT VERB
    DERIV NOUN eur
    IN SUBJECT(P,X) DIROBJ(P,Y)
    OUT ATTRIBUTE(X,D) PREPPH(D,de,Y)
    CONSTR T
    END

P names the pivot inside IN templates, D the derivative inside OUT
templates; other single-letter variables must be bound by IN before OUT
may use them.
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path

from .depgraph import (
    BASE,
    DERIVATIONAL,
    KNOWN_LABELS,
    PREPPH,
    Dependency,
    DependencyGraph,
    TokenNode,
    copy_graph,
)
from .lexica import CONTENT_POS, senses_by_lemma
from .wsd import select_derivatives

log = logging.getLogger(__name__)

SYN_ONLY = "SYN_ONLY"
DERIV_ONLY = "DERIV_ONLY"
SYN_THEN_DERIV = "SYN_THEN_DERIV"
DERIV_THEN_SYN = "DERIV_THEN_SYN"
BOTH = "BOTH"
ENRICHMENT_ORDERS = (SYN_ONLY, DERIV_ONLY, SYN_THEN_DERIV, DERIV_THEN_SYN, BOTH)

PIVOT_VAR = "P"
DERIV_VAR = "D"


class PatternError(ValueError):
    """A pattern file failed validation."""

    def __init__(self, path, lineno: int, message: str):
        self.path = str(path)
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: {message}")


@dataclass(frozen=True)
class DepTemplate:
    """A dependency schema over variables, e.g. PREPPH(D,de,Y)."""

    label: str
    args: tuple
    prep: str | None = None

    def variables(self) -> set:
        return set(self.args)


@dataclass(frozen=True)
class DerivationPattern:
    pattern_id: str
    pivot_pos: str
    deriv_pos: str
    deriv_suffix: str
    inputs: tuple
    outputs: tuple
    construction: str | None = None


@dataclass
class PatternMatch:
    """One way a pattern fits a graph: bindings plus the derivative to add."""

    pattern: DerivationPattern
    bindings: dict
    derivative: object  # DerivativeRecord

    @property
    def pattern_id(self) -> str:
        return self.pattern.pattern_id


_TEMPLATE_RE = re.compile(r"^([A-Z]+)\(([^()]*)\)$")
_VAR_RE = re.compile(r"^[A-Z]$")


def _parse_template(text: str, path, lineno: int) -> DepTemplate:
    m = _TEMPLATE_RE.match(text)
    if not m:
        raise PatternError(path, lineno, f"bad dependency template: {text!r}")
    label, inner = m.group(1), m.group(2)
    parts = [p.strip() for p in inner.split(",")]
    if label == PREPPH:
        if len(parts) != 3:
            raise PatternError(path, lineno, f"{PREPPH} template takes (head,prep,dependent): {text!r}")
        head, prep, dependent = parts
        args, prep_value = (head, dependent), prep
        if not prep or _VAR_RE.match(prep):
            raise PatternError(path, lineno, f"preposition must be a literal string: {text!r}")
    else:
        if label not in KNOWN_LABELS:
            raise PatternError(path, lineno, f"unknown dependency label {label!r}")
        if len(parts) != 2:
            raise PatternError(path, lineno, f"{label} template takes two arguments: {text!r}")
        args, prep_value = tuple(parts), None
    for var in args:
        if not _VAR_RE.match(var):
            raise PatternError(path, lineno, f"arguments must be single-letter variables: {var!r}")
    return DepTemplate(label, args, prep_value)


def parse_patterns(path) -> list:
    """Load a pattern file, validating block structure and variable binding."""
    patterns = []
    seen_ids = set()
    fields: dict = {}
    start_line = 0

    def finish(lineno):
        for required in ("PATTERN", "PIVOT", "DERIV", "IN", "OUT"):
            if required not in fields:
                raise PatternError(path, lineno, f"block missing {required} line")
        inputs = tuple(fields["IN"])
        outputs = tuple(fields["OUT"])
        bound = set().union(*(t.variables() for t in inputs))
        if PIVOT_VAR not in bound:
            raise PatternError(path, lineno, f"pivot variable {PIVOT_VAR} unused in IN templates")
        if DERIV_VAR in bound:
            raise PatternError(path, lineno, f"{DERIV_VAR} is reserved for OUT templates")
        produced = set().union(*(t.variables() for t in outputs))
        unbound = produced - bound - {DERIV_VAR}
        if unbound:
            raise PatternError(path, lineno, f"unbound output variables: {sorted(unbound)}")
        if DERIV_VAR not in produced:
            raise PatternError(path, lineno, f"no output template mentions {DERIV_VAR}")
        patterns.append(DerivationPattern(
            pattern_id=fields["PATTERN"],
            pivot_pos=fields["PIVOT"],
            deriv_pos=fields["DERIV"][0],
            deriv_suffix=fields["DERIV"][1],
            inputs=inputs,
            outputs=outputs,
            construction=fields.get("CONSTR"),
        ))
        fields.clear()

    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "PATTERN":
            if fields:
                raise PatternError(path, lineno, "previous block not closed with END")
            if not rest:
                raise PatternError(path, lineno, "PATTERN needs an id")
            if rest in seen_ids:
                raise PatternError(path, lineno, f"duplicate pattern id {rest!r}")
            seen_ids.add(rest)
            fields["PATTERN"] = rest
            start_line = lineno
        elif keyword == "END":
            if not fields:
                raise PatternError(path, lineno, "END outside a pattern block")
            finish(lineno)
        elif not fields:
            raise PatternError(path, lineno, f"{keyword} outside a pattern block")
        elif keyword in fields:
            raise PatternError(path, lineno, f"duplicate {keyword} line")
        elif keyword == "PIVOT":
            if rest not in CONTENT_POS:
                raise PatternError(path, lineno, f"bad pivot pos {rest!r}")
            fields["PIVOT"] = rest
        elif keyword == "DERIV":
            parts = rest.split()
            if len(parts) != 2 or parts[0] not in CONTENT_POS:
                raise PatternError(path, lineno, f"DERIV takes 'pos suffix': {rest!r}")
            fields["DERIV"] = (parts[0], "" if parts[1] == "-" else parts[1])
        elif keyword in ("IN", "OUT"):
            templates = [_parse_template(t, path, lineno) for t in rest.split()]
            if not templates:
                raise PatternError(path, lineno, f"{keyword} needs at least one template")
            fields[keyword] = templates
        elif keyword == "CONSTR":
            if not rest:
                raise PatternError(path, lineno, "CONSTR needs a code token")
            fields["CONSTR"] = rest
        else:
            raise PatternError(path, lineno, f"unknown keyword {keyword!r}")
    if fields:
        raise PatternError(path, start_line, "unterminated pattern block")
    return patterns


def enrich_synonyms(graph: DependencyGraph, synonyms) -> DependencyGraph:
    """Attach synonym lemmas as alternates on every significant token."""
    out = copy_graph(graph)
    for token in out.tokens:
        if token.pos not in CONTENT_POS:
            continue
        extra = synonyms.lookup(token.lemma, token.sense_id)
        if extra:
            token.alternates |= extra
            token.alternates.discard(token.lemma)
    return out


def _enumerate_bindings(templates, deps, pivot: int) -> list:
    """All total assignments of template variables to token indices."""
    results = []

    def extend(index, binding):
        if index == len(templates):
            if binding not in results:
                results.append(binding)
            return
        template = templates[index]
        for dep in deps:
            if dep.label != template.label or dep.prep != template.prep:
                continue
            if len(dep.args) != len(template.args):
                continue
            trial = dict(binding)
            consistent = True
            for var, token_index in zip(template.args, dep.args):
                if trial.get(var, token_index) != token_index:
                    consistent = False
                    break
                trial[var] = token_index
            if consistent:
                extend(index + 1, trial)

    extend(0, {PIVOT_VAR: pivot})
    return results


def _construction_ok(pattern: DerivationPattern, senses, sense_id) -> bool:
    """CONSTR is satisfied by a code prefix, and waived when codes are unknown."""
    if pattern.construction is None:
        return True
    relevant = [s for s in senses if sense_id is None or s.sense_id == sense_id]
    codes = [code for s in relevant for code in s.construction_codes]
    if not codes:
        return True
    return any(code.startswith(pattern.construction) for code in codes)


def match_pattern(graph: DependencyGraph, pattern: DerivationPattern, pivot: int,
                  resource, dictionary=None, use_alternates: bool = False) -> list:
    """All ways `pattern` applies at the given pivot token.

    Bindings are sought in BASE dependencies only. A match is produced per
    (binding, eligible derivative); under composition (`use_alternates`)
    the pivot's alternates are consulted as additional pivot lemmas.
    Returns [] when the pivot's part of speech differs from the pattern's.
    """
    token = graph.tokens[pivot]
    if token.pos != pattern.pivot_pos:
        return []
    base_deps = [d for d in graph.deps if d.provenance == BASE]
    bindings_list = _enumerate_bindings(pattern.inputs, base_deps, pivot)
    if not bindings_list:
        return []
    by_lemma = senses_by_lemma(dictionary) if dictionary is not None else {}
    pivot_lemmas = [(token.lemma, token.sense_id)]
    if use_alternates:
        pivot_lemmas.extend((alt, None) for alt in sorted(token.alternates))
    matches = []
    seen = set()
    for binding in bindings_list:
        for lemma, sense_id in pivot_lemmas:
            senses = [s for s in by_lemma.get(lemma, []) if s.pos == pattern.pivot_pos]
            if not _construction_ok(pattern, senses, sense_id):
                continue
            for record in select_derivatives(lemma, sense_id, resource):
                if record.target_pos != pattern.deriv_pos or record.suffix != pattern.deriv_suffix:
                    continue
                key = (record, tuple(sorted(binding.items())))
                if key in seen:
                    continue
                seen.add(key)
                matches.append(PatternMatch(pattern, dict(binding), record))
    return matches


def apply_pattern(graph: DependencyGraph, match: PatternMatch) -> DependencyGraph:
    """Instantiate a match: add the derivative token and its dependencies.

    Returns a new graph; the input is untouched. Applying the same match
    again finds the existing derivative token and adds nothing, so the
    operation is idempotent per (pattern, binding, derivative).
    """
    out = copy_graph(graph)
    record = match.derivative
    deriv_index = None
    for token in out.tokens:
        if (token.features.get("deriv_pattern") == match.pattern_id
                and token.lemma == record.surface):
            deriv_index = token.index
            break
    if deriv_index is None:
        deriv_index = len(out.tokens)
        out.tokens.append(TokenNode(
            index=deriv_index,
            surface=record.surface,
            lemma=record.surface,
            pos=record.target_pos,
            features={"deriv_pattern": match.pattern_id,
                      "deriv_source": record.source_lemma},
        ))
    binding = dict(match.bindings)
    binding[DERIV_VAR] = deriv_index
    for template in match.pattern.outputs:
        args = tuple(binding[var] for var in template.args)
        out.add_dep(Dependency(template.label, args, prep=template.prep,
                               provenance=DERIVATIONAL))
    return out


def apply_patterns(graph: DependencyGraph, patterns, resource, dictionary=None,
                   use_alternates: bool = False) -> DependencyGraph:
    """Apply every match of every pattern, in deterministic order."""
    out = graph
    for pattern in patterns:
        for pivot in range(len(graph.tokens)):
            matches = match_pattern(out, pattern, pivot, resource,
                                    dictionary, use_alternates)
            matches.sort(key=lambda m: (m.derivative.surface,
                                        tuple(sorted(m.bindings.items()))))
            for match in matches:
                out = apply_pattern(out, match)
    return out


def _merge_graphs(a: DependencyGraph, b: DependencyGraph) -> DependencyGraph:
    """Union of two enrichments of the same base graph.

    Base tokens are merged index-wise (alternates unioned); derivative
    tokens are identified by (source pattern, lemma). Dependencies from
    `b` are remapped and unioned in.
    """
    out = copy_graph(a)
    remap = {}
    for token in b.tokens:
        if not token.features.get("deriv_pattern"):
            remap[token.index] = token.index
            out.tokens[token.index].alternates |= token.alternates
            continue
        key = (token.features["deriv_pattern"], token.lemma)
        existing = next(
            (t for t in out.tokens
             if t.features.get("deriv_pattern") == key[0] and t.lemma == key[1]),
            None)
        if existing is None:
            new_index = len(out.tokens)
            out.tokens.append(TokenNode(new_index, token.surface, token.lemma,
                                        token.pos, dict(token.features),
                                        token.sense_id, set(token.alternates)))
            remap[token.index] = new_index
        else:
            existing.alternates |= token.alternates
            remap[token.index] = existing.index
    for dep in b.deps:
        out.add_dep(Dependency(dep.label, tuple(remap[i] for i in dep.args),
                               prep=dep.prep, provenance=dep.provenance))
    return out


def enrich_all(graph: DependencyGraph, resource, patterns, synonyms, order: str,
               dictionary=None) -> DependencyGraph:
    """Apply one enrichment composition to a disambiguated graph.

    SYN_THEN_DERIV lets patterns pivot on synonym alternates;
    DERIV_THEN_SYN gives derivative tokens synonym alternates; BOTH is the
    union of the two single orders.
    """
    if order == SYN_ONLY:
        return enrich_synonyms(graph, synonyms)
    if order == DERIV_ONLY:
        return apply_patterns(graph, patterns, resource, dictionary)
    if order == SYN_THEN_DERIV:
        out = enrich_synonyms(graph, synonyms)
        return apply_patterns(out, patterns, resource, dictionary, use_alternates=True)
    if order == DERIV_THEN_SYN:
        out = apply_patterns(graph, patterns, resource, dictionary)
        return enrich_synonyms(out, synonyms)
    if order == BOTH:
        first = enrich_all(graph, resource, patterns, synonyms, SYN_THEN_DERIV, dictionary)
        second = enrich_all(graph, resource, patterns, synonyms, DERIV_THEN_SYN, dictionary)
        return _merge_graphs(first, second)
    raise ValueError(f"unknown enrichment order {order!r}")
