"""Gap-constrained tag-pattern mining and signature-based attribution.

The pipeline runs in four stages: annotated XML documents are parsed into
per-sentence tag sequences, each document is mined for its top-k patterns
under a gap constraint, per-class signatures are formed by intersecting
document pattern sets and removing everything shared with other classes,
and unseen documents are attributed to the class whose signature they
correlate with best.
"""

from .extract import (
    AnnotatedDocument,
    AnnotationTag,
    MalformedXml,
    MissingPos,
    TagSequence,
    extract_sequences,
    parse_annotated_xml,
    write_tagseq,
)
from .seqdb import (
    Dictionary,
    MalformedLine,
    MiningParams,
    Pattern,
    Sequence,
    SequenceDatabase,
    build_vertical,
    contains,
    encode_corpus,
    read_spmf_db,
    read_spmf_patterns,
    read_tagseq,
    support,
    write_spmf_db,
    write_spmf_patterns,
)
from .miner import (
    InvalidParams,
    MiningTrace,
    NonCanonical,
    TopKState,
    build_pmap,
    discard_infrequent,
    i_extend,
    mine_topk,
    prune_with_pmap,
    raise_threshold,
    s_extend,
)
from .oracle import SizeGuard, enumerate_all, topk_oracle
from .signatures import (
    DocumentPatterns,
    EmptyCorpus,
    Signature,
    SignatureStats,
    build_class_signatures,
    initial_signature,
    mine_document,
    reference_patterns,
    revise_signature,
    temporal_stats,
)
from .attribution import (
    AttributionResult,
    EvaluationReport,
    LengthMismatch,
    TooFewDocuments,
    classify,
    evaluate,
    pearson,
    vectorize,
)

__version__ = "0.1.0"
