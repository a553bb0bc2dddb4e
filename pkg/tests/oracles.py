"""Brute-force reference implementations used to cross-check the package.

Everything here trades efficiency for obviousness: exhaustive enumeration
instead of indexing, itertools instead of hand-rolled recursion. Tests
compare the fast implementations against these on small inputs.
"""

import itertools
import re

VOWELS = "aeiouyàâäéèêëíîïóôöùûüÿ"
_VOWEL_GROUP = re.compile(f"[{VOWELS}]+")


def syllables(word: str) -> int:
    """Count maximal vowel groups with a regex."""
    return len(_VOWEL_GROUP.findall(word.lower()))


def suffix_inventory(entries, threshold: int, min_stem_len: int = 3) -> dict:
    """Reference suffix learner: per-lemma shortest common prefix, then
    residuals of every vocabulary word over its longest stem prefix."""
    prefixes_per_lemma = {}
    for entry in entries:
        form = entry.surface_form.lower()
        lemma = entry.lemma.lower()
        if form == lemma:
            continue
        shared = ""
        for a, b in zip(form, lemma):
            if a != b:
                break
            shared += a
        if len(shared) >= min_stem_len:
            prefixes_per_lemma.setdefault(lemma, []).append(shared)
    stems = {min(prefixes, key=len) for prefixes in prefixes_per_lemma.values()}

    vocabulary = {e.surface_form.lower() for e in entries}
    vocabulary |= {e.lemma.lower() for e in entries}
    counts = {}
    for word in vocabulary:
        matching = [s for s in stems if word.startswith(s) and word != s]
        if not matching:
            continue
        stem = max(matching, key=len)
        counts.setdefault(word[len(stem):], set()).add(stem)
    return {suffix: len(s) for suffix, s in counts.items() if len(s) >= threshold}


def instruction_filter(candidates, senses, code_table) -> dict:
    """Reference instruction filter: surface -> set of licensing sense ids."""
    from derivqa.lexica import instructions_for

    licensed = {}
    for cand in candidates:
        for sense in senses:
            for instruction in instructions_for(sense, code_table):
                if instruction.suffix == cand.suffix:
                    licensed.setdefault(cand.surface, set()).add(sense.sense_id)
    return licensed


def template_matches_dep(template, dep) -> bool:
    return (dep.label == template.label and dep.prep == template.prep
            and len(dep.args) == len(template.args))


def enumerate_bindings(pattern, deps, pivot: int) -> set:
    """All consistent variable bindings, by exhaustive template-to-dep product.

    Returns a set of frozensets of (variable, token index) pairs.
    """
    results = set()
    for assignment in itertools.product(deps, repeat=len(pattern.inputs)):
        binding = {"P": pivot}
        ok = True
        for template, dep in zip(pattern.inputs, assignment):
            if not template_matches_dep(template, dep):
                ok = False
                break
            for var, index in zip(template.args, dep.args):
                if binding.setdefault(var, index) != index:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            results.add(frozenset(binding.items()))
    return results


def max_coverage_pairs(qgraph, tgraph, match_fn) -> int:
    """Size of the largest one-to-one question-to-sentence dep pairing,
    by trying every injective assignment."""
    q_deps = list(range(len(qgraph.deps)))
    t_deps = list(range(len(tgraph.deps)))
    edges = {
        qi: [ti for ti in t_deps if match_fn(qgraph, qgraph.deps[qi], tgraph, tgraph.deps[ti])]
        for qi in q_deps
    }

    best = 0
    def extend(qi, used, size):
        nonlocal best
        best = max(best, size)
        if qi == len(q_deps):
            return
        extend(qi + 1, used, size)  # leave this question dep unmatched
        for ti in edges[qi]:
            if ti not in used:
                extend(qi + 1, used | {ti}, size + 1)

    extend(0, frozenset(), 0)
    return best


def bag_overlap(q_lemmas, t_lemmas) -> int:
    return len(set(q_lemmas) & set(t_lemmas))
