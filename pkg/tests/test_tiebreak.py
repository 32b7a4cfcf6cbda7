import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rhetsum.document_model import (
    DEFAULT_PROFILE,
    DocumentSpec,
    MediaType,
    Relation,
    RelationCategory,
    TopicInterest,
    Unit,
    UnitKind,
    UserProfile,
)
from rhetsum.graph import _assemble, build_graph
from rhetsum.synth import random_document
from rhetsum.tiebreak import (
    InteractionError,
    TieDecision,
    apply_tie_decisions,
    resolve_equal_weights,
    resolve_group,
)
from rhetsum.weighting import Ranking

NS = RelationCategory.NUCLEUS_SATELLITE
MN = RelationCategory.MULTI_NUCLEUS
METHODS = {"media_hierarchy", "role_precedence", "user_intervention", "document_order_fallback"}

IMAGE_FIRST = UserProfile(
    media_hierarchy=(MediaType.IMAGE, MediaType.TEXT, MediaType.VIDEO, MediaType.AUDIO)
)


def unit(uid, media=MediaType.TEXT, topics=()):
    return Unit(uid, UnitKind.ESU, media, 10.0, topics=tuple(topics))


def ns(n, s):
    return Relation(NS, "Elaboration", nucleus=n, satellite=s)


def graph(units, relations=()):
    return _assemble(DocumentSpec("t", units[0].id, tuple(units), tuple(relations)), lambda _: 0.5)


def test_image_beats_text_under_image_first_profile():
    g = graph([unit("r"), unit("sentence1"), unit("image1", MediaType.IMAGE)])
    d = resolve_group(["sentence1", "image1"], g, IMAGE_FIRST)
    assert d.chosen_order == ("image1", "sentence1") and d.method == "media_hierarchy"


def test_group_of_one():
    g = graph([unit("r")])
    d = resolve_group(["r"], g, DEFAULT_PROFILE)
    assert d.chosen_order == ("r",)


def test_nucleus_before_satellite():
    g = graph([unit("r"), unit("s2"), unit("s1"), unit("x")], [ns("r", "s2"), ns("s1", "x")])
    d = resolve_group(["s2", "s1"], g, DEFAULT_PROFILE)
    assert d.chosen_order == ("s1", "s2") and d.method == "role_precedence"


def test_out_degree_orders_nuclei():
    g = graph(
        [unit("r"), unit("a"), unit("b"), unit("x"), unit("y"), unit("z")],
        [ns("a", "x"), ns("b", "y"), ns("b", "z")],
    )
    assert resolve_group(["a", "b"], g, DEFAULT_PROFILE).chosen_order == ("b", "a")


def test_satellites_fall_back_to_document_order():
    g = graph([unit("r"), unit("t1"), unit("t2")], [ns("r", "t1"), ns("r", "t2")])
    d = resolve_group(["t2", "t1"], g, DEFAULT_PROFILE)
    assert d.chosen_order == ("t1", "t2") and d.method == "document_order_fallback"


def test_topic_interest_before_document_order():
    profile = UserProfile(topics=(TopicInterest("station", 0.9),))
    g = graph([unit("r"), unit("t1"), unit("t2", topics=["station"])], [ns("r", "t1"), ns("r", "t2")])
    d = resolve_group(["t1", "t2"], g, profile)
    assert d.chosen_order == ("t2", "t1") and d.method == "document_order_fallback"
    assert "topic" in d.detail


def test_user_orders_residual_tie():
    profile = UserProfile(interactive=True)
    g = graph([unit("r"), unit("t1"), unit("t2")], [ns("r", "t1"), ns("r", "t2")])
    seen = []

    def prompt(group, candidates):
        seen.append([c.id for c in candidates])
        return list(reversed(group))

    d = resolve_group(["t1", "t2"], g, profile, prompt)
    assert d.chosen_order == ("t2", "t1") and d.method == "user_intervention"
    assert seen == [["t1", "t2"]]


def test_prompt_not_used_when_not_interactive():
    g = graph([unit("r"), unit("t1"), unit("t2")], [ns("r", "t1"), ns("r", "t2")])
    d = resolve_group(["t1", "t2"], g, DEFAULT_PROFILE, lambda *_: pytest.fail("prompted"))
    assert d.method == "document_order_fallback"


@pytest.mark.parametrize(
    "prompt",
    [lambda g, c: ["t1"], lambda g, c: ["t1", "t1"], lambda g, c: 1 / 0],
    ids=["short", "repeat", "raises"],
)
def test_prompt_failure_falls_back(prompt):
    profile = UserProfile(interactive=True)
    g = graph([unit("r"), unit("t1"), unit("t2")], [ns("r", "t1"), ns("r", "t2")])
    d = resolve_group(["t2", "t1"], g, profile, prompt)
    assert d.chosen_order == ("t1", "t2") and d.method == "document_order_fallback"
    assert "failed" in d.detail
    with pytest.raises(InteractionError):
        resolve_group(["t2", "t1"], g, profile, prompt, strict=True)


def test_apply_rewrites_only_tie_slots():
    ranking = Ranking(("a", "b", "c", "d"), (("b", "c"),))
    order = apply_tie_decisions(ranking, [TieDecision(("b", "c"), ("c", "b"), "role_precedence", "")])
    assert order == ("a", "c", "b", "d")


def test_space_tie_group_uses_media(space_doc):
    g = build_graph(space_doc)
    group = ["Introduction", "Space Race", "Moon Landing", "International Space Station"]
    d = resolve_group(group, g, IMAGE_FIRST)
    assert d.method == "media_hierarchy"
    # Only video differs; it ranks below text under this profile.
    assert d.chosen_order[-1] == "Moon Landing"


# --- properties -------------------------------------------------------------


@st.composite
def groups(draw):
    rng = draw(st.randoms(use_true_random=False))
    doc = random_document(rng, max_units=12)
    g = build_graph(doc)
    members = draw(st.lists(st.sampled_from(g.esus), min_size=2, unique=True)) if len(g.esus) > 1 else []
    hierarchy = tuple(draw(st.permutations(list(MediaType))))
    return g, members, UserProfile(media_hierarchy=hierarchy)


@settings(max_examples=300, deadline=None)
@given(groups())
def test_decisions_are_total_orders(case):
    g, group, profile = case
    if not group:
        return
    [d] = resolve_equal_weights([group], g, profile)
    assert sorted(d.chosen_order) == sorted(group)
    assert d.method in METHODS
    assert resolve_equal_weights([group], g, profile) == [d]


@settings(max_examples=300, deadline=None)
@given(groups())
def test_hierarchy_and_role_respect(case):
    g, group, profile = case
    if not group:
        return
    d = resolve_group(group, g, profile)
    order = d.chosen_order
    if d.method == "media_hierarchy":
        ranks = [profile.media_rank(g.nodes[u].media) for u in order]
        assert ranks == sorted(ranks)
    if d.method == "role_precedence":
        nucleus = [g.heads_ns(u) or g.in_multi_nucleus(u) for u in order]
        assert nucleus == sorted(nucleus, reverse=True)


@settings(max_examples=200, deadline=None)
@given(groups(), st.randoms(use_true_random=False))
def test_interactive_answers_are_respected(case, rng):
    g, group, profile = case
    if not group:
        return
    answer = list(group)
    rng.shuffle(answer)
    interactive = UserProfile(profile.media_hierarchy, interactive=True)
    d = resolve_group(group, g, interactive, lambda grp, c: answer)
    if d.method == "user_intervention":
        assert list(d.chosen_order) == answer
    assert sorted(d.chosen_order) == sorted(group)
