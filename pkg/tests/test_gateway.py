import json

import httpx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bloomtutor import ChatMessage, ChatRequest, Gateway, RemoteBackend, ScriptEntry, ScriptedBackend, extract_json
from bloomtutor.errors import (
    BackendUnreachableError,
    NoJsonFoundError,
    RetryExhaustedError,
    ScriptedExhaustedError,
)
from bloomtutor.gateway import scripted_gateway


def req(tag: str, content: str = "hello") -> ChatRequest:
    return ChatRequest((ChatMessage("user", content),), tag=tag)


class TestScriptedBackend:
    def test_tag_match_returns_canned_response(self):
        gw = scripted_gateway([ScriptEntry(tag="CDM.decompose", response='{"memory": ["x"]}')])
        assert gw.chat(req("CDM.decompose")) == '{"memory": ["x"]}'

    def test_content_substring_match(self):
        gw = scripted_gateway(
            [
                ScriptEntry(tag="t", contains="alpha", response="A"),
                ScriptEntry(tag="t", response="B"),
            ]
        )
        assert gw.chat(req("t", "the alpha path")) == "A"
        assert gw.chat(req("t", "something else")) == "B"

    def test_consumable_entries_run_in_order(self):
        gw = scripted_gateway(
            [
                ScriptEntry(tag="t", response="first", max_uses=1),
                ScriptEntry(tag="t", response="second", max_uses=1),
                ScriptEntry(tag="t", response="rest"),
            ]
        )
        assert [gw.chat(req("t")) for _ in range(4)] == ["first", "second", "rest", "rest"]

    def test_identical_request_sequences_get_identical_responses(self):
        script = lambda: [  # noqa: E731
            ScriptEntry(tag="a", response="1", max_uses=1),
            ScriptEntry(tag="a", response="2"),
            ScriptEntry(tag="b", response="3"),
        ]
        seq = [req("a"), req("b"), req("a"), req("a")]
        gw1 = scripted_gateway(script())
        gw2 = scripted_gateway(script())
        out1 = [gw1.chat(r) for r in seq]
        out2 = [gw2.chat(r) for r in seq]
        assert out1 == out2 == ["1", "3", "2", "2"]

    def test_exhausted_script_raises(self):
        gw = scripted_gateway([ScriptEntry(tag="only", response="x")])
        with pytest.raises(ScriptedExhaustedError):
            gw.chat(req("other"))

    def test_call_log_records_all_traffic(self):
        gw = scripted_gateway([ScriptEntry(response="ok")])
        gw.chat(req("any"))
        gw.chat(req("any2"))
        assert gw.call_count == 2
        assert [r.tag for r, _ in gw.call_log] == ["any", "any2"]


class FlakyBackend:
    kind = "remote"
    embed_dim = 8

    def __init__(self, failures: int):
        self.failures = failures
        self.calls = 0

    def complete(self, request: ChatRequest) -> str:
        self.calls += 1
        if self.calls <= self.failures:
            raise BackendUnreachableError("down")
        return "recovered"

    def embed(self, text: str):
        raise BackendUnreachableError("down")


class TestRetries:
    def test_transient_failures_retried_with_backoff(self):
        sleeps = []
        gw = Gateway(FlakyBackend(failures=2), max_retries=3, backoff_s=0.5, sleep=sleeps.append)
        assert gw.chat(req("x")) == "recovered"
        assert sleeps == [0.5, 1.0]  # exponential

    def test_retry_exhausted(self):
        gw = Gateway(FlakyBackend(failures=10), max_retries=2, sleep=lambda s: None)
        with pytest.raises(RetryExhaustedError):
            gw.chat(req("x"))


class TestRemoteBackend:
    def make(self, handler) -> RemoteBackend:
        return RemoteBackend(
            "http://model.test/v1", model="m", transport=httpx.MockTransport(handler)
        )

    def test_chat_completion_roundtrip(self):
        def handler(request: httpx.Request) -> httpx.Response:
            payload = json.loads(request.content)
            assert payload["model"] == "m"
            assert payload["messages"][0]["content"] == "hello"
            return httpx.Response(200, json={"choices": [{"message": {"content": "hi"}}]})

        assert self.make(handler).complete(req("t")) == "hi"

    def test_server_error_marks_unreachable(self):
        backend = self.make(lambda request: httpx.Response(503))
        with pytest.raises(BackendUnreachableError):
            backend.complete(req("t"))

    def test_network_error_marks_unreachable(self):
        def handler(request):
            raise httpx.ConnectError("boom")

        with pytest.raises(BackendUnreachableError):
            self.make(handler).complete(req("t"))


def oracle_extract(text: str):
    """Reference: every balanced-brace substring, leftmost-longest first."""
    opens = [i for i, ch in enumerate(text) if ch == "{"]
    closes = [i for i, ch in enumerate(text) if ch == "}"]
    for start in opens:
        for end in reversed([c for c in closes if c > start]):
            try:
                value = json.loads(text[start : end + 1])
            except json.JSONDecodeError:
                continue
            if isinstance(value, dict):
                return value
    return None


class TestExtractJson:
    def test_fenced_block(self):
        assert extract_json('```json\n{"a":1}\n```') == {"a": 1}

    def test_surrounding_prose_matches_oracle(self):
        text = 'Sure! {"a": 1} hope that helps'
        assert extract_json(text) == {"a": 1}
        assert extract_json(text) == oracle_extract(text)

    def test_no_json_raises(self):
        with pytest.raises(NoJsonFoundError):
            extract_json("no braces here")

    @pytest.mark.parametrize(
        "text",
        [
            'prefix {"x": {"nested": [1, 2]}} suffix',
            '{"bad: } then {"ok": true}',
            'two objects {"first": 1} and {"second": 2}',
            '{"outer": {"inner": 3}}',
        ],
    )
    def test_agrees_with_balanced_brace_oracle(self, text):
        assert extract_json(text) == oracle_extract(text)

    @settings(max_examples=300, deadline=None)
    @given(st.text(alphabet='{}[]",:abc01 \n', max_size=60))
    def test_never_crashes_and_matches_oracle_on_fuzz(self, text):
        expected = oracle_extract(text)
        if expected is None:
            with pytest.raises(NoJsonFoundError):
                extract_json(text)
        else:
            assert extract_json(text) == expected


class TestEmbeddings:
    def test_deterministic_per_text(self):
        gw = scripted_gateway([])
        assert gw.embed("knn basics") == gw.embed("knn basics")

    def test_unit_norm(self):
        gw = scripted_gateway([])
        for text in ("a", "b", "a longer sentence about distance metrics"):
            assert abs(np.linalg.norm(gw.embed(text)) - 1.0) < 1e-9

    def test_distinct_texts_not_parallel(self):
        gw = scripted_gateway([])
        u = np.array(gw.embed("neighbors and votes"))
        v = np.array(gw.embed("trees and splits"))
        assert float(u @ v) < 1.0 - 1e-6

    def test_empty_text_rejected(self):
        with pytest.raises(ValueError):
            scripted_gateway([]).embed("")

    def test_dim_consistent(self):
        gw = Gateway(ScriptedBackend([], embed_dim=16))
        assert len(gw.embed("x")) == 16
        assert gw.embed_dim == 16


class TestAskJson:
    def test_repair_retry_recovers(self):
        gw = scripted_gateway(
            [
                ScriptEntry(tag="j", response="not json at all", max_uses=1),
                ScriptEntry(tag="j", response='{"fixed": true}'),
            ]
        )
        assert gw.ask_json("j", "please") == {"fixed": True}
        # the repair prompt must mention the parse problem
        assert "could not be parsed" in gw.call_log[1][0].text

    def test_two_failures_surface_error(self):
        gw = scripted_gateway([ScriptEntry(tag="j", response="still not json")])
        with pytest.raises(NoJsonFoundError):
            gw.ask_json("j", "please")


class TestTagRouting:
    def test_longest_prefix_wins_with_default_fallthrough(self):
        from bloomtutor.gateway import TagRoutingBackend

        default = ScriptedBackend([ScriptEntry(response="default")])
        dsm = ScriptedBackend([ScriptEntry(response="dsm")])
        dsm_value = ScriptedBackend([ScriptEntry(response="dsm-value")])
        gw = Gateway(TagRoutingBackend(default, {"DSM.": dsm, "DSM.value": dsm_value}))
        assert gw.chat(req("LAM.assess")) == "default"
        assert gw.chat(req("DSM.expand")) == "dsm"
        assert gw.chat(req("DSM.value")) == "dsm-value"

    def test_embeddings_use_default_backend(self):
        from bloomtutor.gateway import TagRoutingBackend

        default = ScriptedBackend([], embed_dim=8)
        other = ScriptedBackend([], embed_dim=32)
        gw = Gateway(TagRoutingBackend(default, {"DSM.": other}))
        assert len(gw.embed("text")) == 8
