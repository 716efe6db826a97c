"""TEI export of parsed threads, one posting element per message.

The layout follows the computer-mediated-communication conventions: each
thread is a div carrying its page of origin, each message a <post> with
author, timestamp and indentation. import_tei inverts export_tei exactly.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from datetime import datetime
from pathlib import Path
from typing import Iterable

from .parsing import Message, Thread, UNSIGNED

TEI_NS = "http://www.tei-c.org/ns/1.0"
XML_SPACE = "{http://www.w3.org/XML/1998/namespace}space"

ET.register_namespace("", TEI_NS)


def _tag(name: str) -> str:
    return f"{{{TEI_NS}}}{name}"


def export_tei(threads: Iterable[Thread], title: str = "Talk-page discussion corpus") -> str:
    """Serialize threads to a TEI document string."""
    root = ET.Element(_tag("TEI"))
    header = ET.SubElement(root, _tag("teiHeader"))
    file_desc = ET.SubElement(header, _tag("fileDesc"))
    title_stmt = ET.SubElement(file_desc, _tag("titleStmt"))
    ET.SubElement(title_stmt, _tag("title")).text = title
    pub = ET.SubElement(file_desc, _tag("publicationStmt"))
    ET.SubElement(pub, _tag("p")).text = "Machine-generated corpus export"
    source = ET.SubElement(file_desc, _tag("sourceDesc"))
    ET.SubElement(source, _tag("p")).text = "Wikipedia talk pages"

    body = ET.SubElement(ET.SubElement(root, _tag("text")), _tag("body"))
    for i, thread in enumerate(threads):
        div = ET.SubElement(
            body,
            _tag("div"),
            {
                "type": "thread",
                "n": thread.thread_id,
                "corresp": thread.source_page,
                "ana": "bot" if thread.has_bot else "human",
            },
        )
        head = ET.SubElement(div, _tag("head"))
        head.text = thread.title
        for message in thread.messages:
            attrs = {
                "type": message.author_kind,
                "n": str(message.rank),
                "indentLevel": str(message.indent_depth),
                "wordCount": str(message.word_count),
            }
            if message.author_id is not None:
                attrs["who"] = message.author_id
            if message.timestamp is not None:
                attrs["when"] = message.timestamp.isoformat()
            post = ET.SubElement(div, _tag("post"), attrs)
            para = ET.SubElement(post, _tag("p"), {XML_SPACE: "preserve"})
            para.text = message.text
    ET.indent(root, space="  ")
    # keep <p> inline so preserved message text is untouched by indentation
    _strip_p_tails(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True)


def _strip_p_tails(root: ET.Element) -> None:
    for post in root.iter(_tag("post")):
        for p in post:
            p.tail = None
        post.text = None


def import_tei(source: str | Path) -> list[Thread]:
    """Parse a TEI export back into threads (inverse of export_tei)."""
    if isinstance(source, str) and source.lstrip().startswith("<"):
        root = ET.fromstring(source)
    else:
        root = ET.parse(source).getroot()
    threads = []
    for div in root.iter(_tag("div")):
        if div.get("type") != "thread":
            continue
        head = div.find(_tag("head"))
        messages = []
        for post in div.findall(_tag("post")):
            para = post.find(_tag("p"))
            text = para.text if para is not None and para.text is not None else ""
            when = post.get("when")
            messages.append(
                Message(
                    author_id=post.get("who"),
                    author_kind=post.get("type", UNSIGNED),
                    timestamp=datetime.fromisoformat(when) if when else None,
                    rank=int(post.get("n", "0")),
                    indent_depth=int(post.get("indentLevel", "0")),
                    text=text,
                    word_count=int(post.get("wordCount", "0")),
                )
            )
        threads.append(
            Thread(
                thread_id=div.get("n", ""),
                title=head.text if head is not None and head.text is not None else "",
                source_page=div.get("corresp", ""),
                messages=tuple(messages),
                has_bot=div.get("ana") == "bot",
            )
        )
    return threads


def write_tei(threads: Iterable[Thread], path: str | Path) -> None:
    Path(path).write_text(export_tei(threads), encoding="utf-8")
