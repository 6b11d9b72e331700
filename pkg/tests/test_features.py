import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vidcurate.corpus import VideoRecord
from vidcurate.features import (FeatureVector, Vocab, build_content_view,
                                build_metadata_view, fit_vocab,
                                read_transcripts, read_visual_features, tfidf)


class TestFitVocab:
    def test_min_df_two(self):
        vocab = fit_vocab(["a b", "b c"], min_df=2)
        assert set(vocab.entries) == {"b"}
        assert vocab.n_docs == 2

    def test_min_df_one_single_doc(self):
        vocab = fit_vocab(["x y"], min_df=1)
        assert set(vocab.entries) == {"x", "y"}

    def test_three_doc_fixture_hand_counted(self):
        # dfs: sugar 2, blood 2, insulin 1, diet 3
        docs = ["sugar blood diet", "insulin diet sugar blood", "diet"]
        vocab = fit_vocab(docs, min_df=2)
        assert set(vocab.entries) == {"blood", "diet", "sugar"}
        assert vocab.entries["blood"][1] == 2
        assert vocab.entries["diet"][1] == 3
        # lexicographic indexing
        assert [t for t, _ in sorted(vocab.entries.items(), key=lambda kv: kv[1][0])] \
            == ["blood", "diet", "sugar"]

    def test_empty_corpus(self):
        assert len(fit_vocab([], min_df=1)) == 0

    def test_round_trip(self, tmp_path):
        vocab = fit_vocab(["a b", "b c"], min_df=1)
        vocab.save(tmp_path / "v.tsv")
        back = Vocab.load(tmp_path / "v.tsv")
        assert back.entries == vocab.entries and back.n_docs == vocab.n_docs


class TestTfidf:
    def test_oov_only_gives_zero_vector(self):
        vocab = fit_vocab(["a b"], min_df=1)
        vec = tfidf("zzz qqq", vocab)
        assert vec.weights == {} and vec.l2_norm() == 0.0

    def test_single_term_is_unit_vector(self):
        vocab = fit_vocab(["a b", "a c"], min_df=1)
        vec = tfidf("a a a", vocab)
        assert len(vec.weights) == 1
        assert vec.l2_norm() == pytest.approx(1.0, abs=1e-12)

    def test_two_term_hand_formula(self):
        # n_docs=4, dfs: common=4, rare=2
        docs = ["common rare", "common rare", "common", "common"]
        vocab = fit_vocab(docs, min_df=1)
        vec = tfidf("common rare rare", vocab)
        w_common = 1 * (math.log(5 / 5) + 1)
        w_rare = 2 * (math.log(5 / 3) + 1)
        norm = math.sqrt(w_common ** 2 + w_rare ** 2)
        assert vec.weights[vocab.index("common")] == pytest.approx(w_common / norm, abs=1e-12)
        assert vec.weights[vocab.index("rare")] == pytest.approx(w_rare / norm, abs=1e-12)

    @given(st.text(alphabet="abc ", max_size=40))
    @settings(max_examples=100)
    def test_norm_is_one_or_zero(self, text):
        vocab = fit_vocab(["a b c", "a b", "c c a"], min_df=1)
        norm = tfidf(text, vocab).l2_norm()
        assert norm == 0.0 or abs(norm - 1.0) < 1e-12

    def test_deterministic_bitwise(self):
        vocab = fit_vocab(["a b c", "c d"], min_df=1)
        assert tfidf("a c d d", vocab) == tfidf("a c d d", vocab)


class TestMetadataView:
    def make_record(self, **kw):
        defaults = dict(video_id="v1", title="", description="", tags=[],
                        duration_seconds=0, captions_available=False,
                        definition="sd", view_count=0)
        defaults.update(kw)
        return VideoRecord(**defaults)

    def test_all_zero_record(self):
        vocab = fit_vocab(["a"], min_df=1)
        vec = build_metadata_view(self.make_record(), vocab)
        assert vec.weights == {}
        assert vec.dimension == len(vocab) + 4

    def test_captions_flip_changes_one_coordinate(self):
        vocab = fit_vocab(["a"], min_df=1)
        off = build_metadata_view(self.make_record(), vocab)
        on = build_metadata_view(self.make_record(captions_available=True), vocab)
        diff = {i for i in set(off.weights) | set(on.weights)
                if off.weights.get(i, 0.0) != on.weights.get(i, 0.0)}
        assert diff == {len(vocab) + 1}

    def test_fixture_record_matches_hand_built_reference(self):
        docs = ["diabetes diet", "diet plan"]
        vocab = fit_vocab(docs, min_df=1)   # diabetes=0, diet=1, plan=2
        record = self.make_record(title="diabetes diet", duration_seconds=120,
                                  captions_available=True, definition="hd",
                                  view_count=999)
        vec = build_metadata_view(record, vocab)
        w_diabetes = math.log(3 / 2) + 1
        w_diet = math.log(3 / 3) + 1
        norm = math.sqrt(w_diabetes ** 2 + w_diet ** 2)
        expected = {
            0: w_diabetes / norm,
            1: w_diet / norm,
            3: math.log1p(120),
            4: 1.0,
            5: 1.0,
            6: math.log1p(999),
        }
        assert set(vec.weights) == set(expected)
        for idx, val in expected.items():
            assert vec.weights[idx] == pytest.approx(val, abs=1e-12)

    def test_view_count_excludable(self):
        vocab = fit_vocab(["a"], min_df=1)
        vec = build_metadata_view(self.make_record(view_count=10), vocab,
                                  include_view_count=False)
        assert len(vocab) + 3 not in vec.weights
        assert vec.dimension == len(vocab) + 4


class TestContentView:
    def test_transcript_only(self):
        vocab = fit_vocab(["sugar insulin"], min_df=1)
        vec = build_content_view("sugar", None, vocab, visual_dim=3)
        assert vec.dimension == len(vocab) + 3
        assert all(i < len(vocab) for i in vec.weights)

    def test_visual_only(self):
        vocab = fit_vocab(["sugar insulin"], min_df=1)
        visual = FeatureVector(weights={0: 0.5, 2: 0.25}, dimension=3)
        vec = build_content_view(None, visual, vocab)
        assert vec.weights == {len(vocab): 0.5, len(vocab) + 2: 0.25}

    def test_both_equal_blockwise_concatenation(self):
        vocab = fit_vocab(["sugar insulin", "sugar"], min_df=1)
        visual = FeatureVector(weights={1: 0.7}, dimension=2)
        both = build_content_view("insulin insulin", visual, vocab)
        text_only = build_content_view("insulin insulin", None, vocab, visual_dim=2)
        vis_only = build_content_view(None, visual, vocab)
        merged = dict(text_only.weights)
        merged.update(vis_only.weights)
        assert both.weights == merged

    def test_both_absent_is_error(self):
        vocab = fit_vocab(["a"], min_df=1)
        with pytest.raises(ValueError, match="content view unavailable"):
            build_content_view(None, None, vocab)

    def test_visual_dim_mismatch(self):
        vocab = fit_vocab(["a"], min_df=1)
        visual = FeatureVector(weights={0: 1.0}, dimension=2)
        with pytest.raises(ValueError):
            build_content_view(None, visual, vocab, visual_dim=5)


class TestViewIndependence:
    def test_views_use_disjoint_vocabularies(self):
        meta_vocab = fit_vocab(["title words here"], min_df=1)
        content_vocab = fit_vocab(["transcript words here"], min_df=1)
        record = VideoRecord(video_id="v", title="title words here")
        meta = build_metadata_view(record, meta_vocab)
        content = build_content_view("transcript words here", None, content_vocab)
        # separate vector spaces: same integer index refers to different terms
        assert meta.dimension == len(meta_vocab) + 4
        assert content.dimension == len(content_vocab)


class TestFileReaders:
    def test_transcripts(self, tmp_path):
        p = tmp_path / "t.tsv"
        p.write_text("v1\thello world\nv2\tsecond\ttext keeps tabs\n", encoding="utf-8")
        t = read_transcripts(p)
        assert t["v1"] == "hello world"
        assert t["v2"] == "second\ttext keeps tabs"

    def test_visual_features_header_and_rows(self, tmp_path):
        p = tmp_path / "vis.tsv"
        p.write_text("# dim=3\nv1\t0.5\t0\t0.25\n", encoding="utf-8")
        feats = read_visual_features(p)
        assert feats["v1"].dimension == 3
        assert feats["v1"].weights == {0: 0.5, 2: 0.25}

    def test_visual_features_wrong_width(self, tmp_path):
        p = tmp_path / "vis.tsv"
        p.write_text("# dim=3\nv1\t0.5\t0\n", encoding="utf-8")
        with pytest.raises(ValueError):
            read_visual_features(p)
