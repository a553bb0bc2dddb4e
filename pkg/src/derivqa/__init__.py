"""derivqa: question answering by derivational rephrasing of dependency graphs.

The pipeline over-generates suffixed derivatives of dictionary entries,
keeps the ones attested in a corpus wordlist and licensed by per-sense
derivational instructions, then uses them to rewrite the dependency graphs
of indexed sentences so that questions phrased with a derivative ("le
successeur de X") can match text phrased with the base word ("succéda à X").
"""

__version__ = "0.1.0"
