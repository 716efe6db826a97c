from datetime import datetime, timedelta, timezone

import pytest
from hypothesis import given, strategies as st

from wikitalk.parsing import (
    Thread,
    TimestampParseError,
    filter_thread,
    is_bot,
    parse_french_timestamp,
    parse_signature,
    segment_messages,
    split_sections,
)

CET = timezone(timedelta(hours=1))
CEST = timezone(timedelta(hours=2))


class TestSplitSections:
    def test_single_level2_heading(self):
        assert split_sections("== Youtube ==\ncorps du fil") == [("Youtube", "corps du fil")]

    def test_empty_page(self):
        assert split_sections("") == []

    def test_subsection_stays_in_parent(self):
        page = "== Parent ==\ndebut\n=== sub ===\nsuite\n== Autre ==\nfin\n"
        sections = split_sections(page)
        assert [h for h, _ in sections] == ["Parent", "Autre"]
        assert "=== sub ===" in sections[0][1]
        assert "suite" in sections[0][1]

    def test_preamble_becomes_headingless_entry(self):
        page = "{{Wikiprojet}}\n== Premier ==\ntexte\n"
        sections = split_sections(page)
        assert sections[0] == ("", "{{Wikiprojet}}\n")
        assert sections[1][0] == "Premier"

    def test_blank_preamble_skipped(self):
        assert split_sections("\n\n== A ==\nx")[0][0] == "A"


class TestParseFrenchTimestamp:
    def test_paper_example(self):
        assert parse_french_timestamp("21 février 2010 à 19:26 (CET)") == datetime(
            2010, 2, 21, 19, 26, tzinfo=CET
        )

    def test_unknown_month_is_error(self):
        with pytest.raises(TimestampParseError, match="smarch"):
            parse_french_timestamp("21 smarch 2010 à 19:26 (CET)")

    def test_summer_time_offset(self):
        assert parse_french_timestamp("15 août 2008 à 08:05 (CEST)") == datetime(
            2008, 8, 15, 8, 5, tzinfo=CEST
        )

    def test_utc_zone(self):
        ts = parse_french_timestamp("1 janvier 2020 à 00:05 (UTC)")
        assert ts.utcoffset() == timedelta(0)

    def test_unknown_zone_is_error(self):
        with pytest.raises(TimestampParseError, match="PST"):
            parse_french_timestamp("21 février 2010 à 19:26 (PST)")

    def test_missing_datetime_is_error(self):
        with pytest.raises(TimestampParseError):
            parse_french_timestamp("pas de date ici")


class TestParseSignature:
    def test_rendered_form_with_d_link(self):
        sig = parse_signature("--Aacitoyen (d) 21 février 2010 à 19:47 (CET)")
        assert sig is not None
        assert sig.author_id == "Aacitoyen"
        assert sig.author_kind == "registered"
        assert sig.timestamp == datetime(2010, 2, 21, 19, 47, tzinfo=CET)

    def test_no_signature(self):
        assert parse_signature("just some text with no date") is None

    def test_bare_ip(self):
        sig = parse_signature("192.0.2.7 (d) 23 février 2010 à 23:25 (CET)")
        assert sig is not None
        assert sig.author_id == "192.0.2.7"
        assert sig.author_kind == "anonymous_ip"
        assert sig.timestamp == datetime(2010, 2, 23, 23, 25, tzinfo=CET)

    def test_wikitext_user_link(self):
        text = (
            "Voilà qui est fait. --[[Utilisateur:Rédacteur Tibet|Rédacteur Tibet]] "
            "([[Discussion utilisateur:Rédacteur Tibet|d]]) 21 février 2010 à 19:26 (CET)"
        )
        sig = parse_signature(text)
        assert sig.author_id == "Rédacteur Tibet"
        # span covers the whole signature, from the dashes to the zone
        assert text[sig.span[0] : sig.span[1]].startswith("--[[Utilisateur:")
        assert text[sig.span[0] : sig.span[1]].endswith("(CET)")

    def test_ipv6_contributions_link(self):
        sig = parse_signature(
            "fait. [[Spécial:Contributions/2001:db8::7|2001:db8::7]] "
            "(d) 2 mars 2019 à 10:00 (CET)"
        )
        assert sig.author_kind == "anonymous_ip"
        assert sig.author_id == "2001:db8::7"

    def test_body_date_without_author_is_not_a_signature(self):
        assert parse_signature("le 21 février 2010 à 19:26 (CET), la page a changé") is None

    def test_name_not_pulled_across_sentence_boundary(self):
        sig = parse_signature(
            "merci de ne pas faire de procès d'intention.--Rédacteur Tibet (d) "
            "21 février 2010 à 19:49 (CET)"
        )
        assert sig.author_id == "Rédacteur Tibet"

    def test_search_starts_at_position(self):
        text = (
            "--Alice (d) 1 mars 2020 à 10:00 (CET) suite "
            "--Bob (d) 1 mars 2020 à 11:00 (CET)"
        )
        first = parse_signature(text)
        second = parse_signature(text, first.span[1])
        assert (first.author_id, second.author_id) == ("Alice", "Bob")
        assert parse_signature(text, second.span[1]) is None


class TestSegmentMessages:
    def test_six_signed_blocks(self, example_thread):
        # reconstruction of the archived "Youtube" thread
        authors = [m.author_id for m in example_thread.messages]
        assert authors[:6] == [
            "Rédacteur Tibet",
            "Aacitoyen",
            "Rédacteur Tibet",
            "Kyro",
            "Aacitoyen",
            "Elnon",
        ]

    def test_unsigned_body_is_single_message(self):
        msgs = segment_messages("du texte sans aucune signature\nsur deux lignes")
        assert len(msgs) == 1
        assert msgs[0].author_id is None
        assert msgs[0].author_kind == "unsigned"
        assert msgs[0].timestamp is None
        assert "deux lignes" in msgs[0].text

    def test_indent_depths(self):
        body = (
            "Premier message sans retrait. --Alice (d) 1 mars 2020 à 10:00 (CET)\n"
            ":Réponse avec un niveau de retrait. --Bob (d) 1 mars 2020 à 11:00 (CET)\n"
        )
        msgs = segment_messages(body)
        assert [m.indent_depth for m in msgs] == [0, 1]

    def test_trailing_unsigned_message(self):
        body = (
            "Premier message signé. --Alice (d) 1 mars 2020 à 10:00 (CET)\n"
            "Un remerciement laissé sans signature.\n"
        )
        msgs = segment_messages(body)
        assert len(msgs) == 2
        assert msgs[1].author_id is None
        assert msgs[1].rank == 2

    def test_ranks_consecutive_from_one(self, kept_threads):
        for thread in kept_threads:
            assert [m.rank for m in thread.messages] == list(
                range(1, len(thread.messages) + 1)
            )

    def test_signature_stripped_from_text(self):
        body = "Fait. --Alice (d) 1 mars 2020 à 10:00 (CET)\n"
        (msg,) = segment_messages(body)
        assert msg.text == "Fait."
        assert msg.word_count == 1

    def test_timestamp_parseable_from_signature_span(self, talk_pages):
        # every signed message's timestamp is recoverable from its span
        checked = 0
        for page in talk_pages:
            for _, body in split_sections(page.text):
                at = 0
                while (sig := parse_signature(body, at)) is not None:
                    span_text = body[sig.span[0] : sig.span[1]]
                    assert parse_french_timestamp(span_text) == sig.timestamp
                    at = sig.span[1]
                    checked += 1
        assert checked >= 30


class TestBots:
    def test_bot_suffix(self):
        assert is_bot("SallyBot") is True

    def test_human(self):
        assert is_bot("Kyro") is False

    def test_explicit_list_case_insensitive(self):
        assert is_bot("loveless", {"Loveless"}) is True


def _thread(messages, has_bot=False):
    return Thread(
        thread_id="t", title="T", source_page="Discussion:P",
        messages=tuple(messages), has_bot=has_bot,
    )


class TestFilterThread:
    def test_one_word_thread_dropped(self):
        (msg,) = segment_messages("ok --Alice (d) 1 mars 2020 à 10:00 (CET)")
        assert filter_thread(_thread([msg])) == "too_few_words"

    def test_bot_thread_dropped(self, parsed_threads):
        verdicts = {t.thread_id: v for t, v in parsed_threads}
        assert verdicts["Discussion:Fromage#s0"] == "bot"

    def test_example_thread_kept(self, parsed_threads):
        verdicts = {t.thread_id: v for t, v in parsed_threads}
        assert verdicts["Discussion:Troubles au Tibet en mars 2008/archives_2009#s0"] is None

    def test_empty_thread_dropped(self):
        assert filter_thread(_thread([])) == "no_messages"

    def test_two_words_exactly_is_kept(self):
        (msg,) = segment_messages("Deux mots. --Alice (d) 1 mars 2020 à 10:00 (CET)")
        assert msg.word_count == 2
        assert filter_thread(_thread([msg])) is None

    def test_idempotent_and_order_independent(self, parsed_threads):
        threads = [t for t, _ in parsed_threads]
        once = [filter_thread(t) for t in threads]
        twice = [filter_thread(t) for t in threads]
        assert once == twice
        reordered = [filter_thread(t) for t in reversed(threads)]
        assert reordered == list(reversed(once))


@given(st.lists(st.sampled_from(["Alice", "Bob", "Carol"]), min_size=1, max_size=8))
def test_segmented_ranks_always_consecutive(authors):
    body = "".join(
        f"Un message plutôt court numéro {i}. --{a} (d) {i + 1} mars 2020 à 10:0{i % 10} (CET)\n"
        for i, a in enumerate(authors)
    )
    msgs = segment_messages(body)
    assert [m.rank for m in msgs] == list(range(1, len(msgs) + 1))
    assert len(msgs) == len(authors)
