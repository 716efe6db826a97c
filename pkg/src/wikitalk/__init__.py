"""wikitalk: reconstruct and analyse multiparty Wikipedia talk-page discussions.

Pipeline: stream pages from a MediaWiki XML dump, split them into
signature-delimited threads, flatten each thread into a lettered
conversation schema, then aggregate corpus statistics, contrastive lexical
specificities and manual-annotation samples served over HTTP.
"""

__version__ = "0.1.0"

from .dump import RawPage, is_archive_subpage, stream_pages
from .model import FlatThread, Participant, flatten, third_arrival_rank
from .parsing import (
    Message,
    Signature,
    Thread,
    filter_thread,
    parse_french_timestamp,
    parse_page,
    parse_signature,
    segment_messages,
    split_sections,
)

__all__ = [
    "RawPage",
    "stream_pages",
    "is_archive_subpage",
    "Message",
    "Signature",
    "Thread",
    "split_sections",
    "parse_signature",
    "parse_french_timestamp",
    "segment_messages",
    "filter_thread",
    "parse_page",
    "FlatThread",
    "Participant",
    "flatten",
    "third_arrival_rank",
    "__version__",
]
