"""fraglead: fragment linearized molecular structures and search with them.

The pipeline: tokenize a SMILES string into symbols, slice symbol windows
out of it, count how many documents (or web hits) contain each window, and
fit the log-size trend against fragment size.  A compact drug-lead
ontology stores fragments alongside named components as the source of
search inputs.
"""

from fraglead.analysis import (
    ResultRow,
    ResultTable,
    TrendFit,
    emit_csv,
    emit_plot,
    fit_trend,
    log_transform,
    threshold_length,
)
from fraglead.corpus import Corpus, SubstringIndex, build, count_documents, naive_count
from fraglead.fragments import Fragment, SizeSchedule, render, sample, windows
from fraglead.ontology import (
    DrugLeadOntology,
    FragmentComponent,
    NamedComponent,
    Skeleton,
    add_component,
    add_drug,
    search_inputs,
    validate,
)
from fraglead.search import (
    BackendConfig,
    QueryCache,
    QueryResult,
    cached_execute,
    execute,
    open_backend,
    sweep,
)
from fraglead.smiles import (
    Atom,
    Bond,
    ElementCounts,
    MolecularGraph,
    Token,
    TokenSequence,
    assign_implicit_hydrogens,
    encode,
    molecular_formula,
    parse,
    parse_smiles,
    tokenize,
)

__version__ = "0.1.0"
