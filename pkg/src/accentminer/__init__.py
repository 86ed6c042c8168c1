"""Phone-level pronunciation rule mining between a reference accent and an
observed accent: lexicon pairing, many-to-many EM alignment, rule mining
against literature, and transcription-agreement scoring."""

from .agreement import DUMMY, KappaReport, LabelSequencePair, align_with_dummy, cohen_kappa, mean_kappa
from .aligner import (
    Alignment,
    AlignmentConfig,
    AlignmentModel,
    UnalignableError,
    init_model,
    load_model,
    pair_likelihood,
    save_model,
    train,
    viterbi_align,
)
from .lexicon import (
    Lexicon,
    LexiconEntry,
    PairedLexicon,
    WordPair,
    pair_lexicons,
    parse_dictionary,
    read_news_format,
    synthesize_dashed,
    write_news_format,
)
from .mining import (
    PRESETS,
    MiningConfig,
    PhoneticRule,
    RuleSet,
    detect_context,
    filter_rules,
    mine,
    source_chunk_occurrences,
)
from .phones import (
    ArpabetTable,
    PhoneError,
    UnknownArpabetSymbol,
    arpabet_to_ipa,
    convert_pronunciation,
    load_arpabet_table,
    parse_ipa_string,
)
from .rulebook import CategorizedReport, LiteratureRule, categorize, load_rulebook

__version__ = "0.1.0"
