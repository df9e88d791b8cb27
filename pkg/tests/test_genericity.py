"""Free-growth certification over the reduced-word tree."""

import random

from birwalk.genericity import (
    GenericityReport,
    all_letters,
    check_genericity,
    reduced_word_count,
)
from birwalk.maps import generator_from_matrices, sample_generators

I3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_reduced_word_count_closed_form():
    assert reduced_word_count(1, 3) == 2 + 2 + 2
    assert reduced_word_count(2, 6) == 4 + 12 + 36 + 108 + 324 + 972
    assert reduced_word_count(2, 6) == 1456


def test_letters_enumeration():
    assert all_letters(2) == ((0, 1), (0, -1), (1, 1), (1, -1))


def test_involution_tuple_fails_certification():
    sigma = generator_from_matrices(0, I3, I3)
    report = check_genericity((sigma,), 2)
    assert not report.ok
    # the involution is self-inverse, so its six points collapse to three
    assert not report.distinct_points_ok
    bad_words = {f.word for f in report.failures}
    # the reduced word "letter twice" composes to the identity: degree drop
    assert ((0, 1), (0, 1)) in bad_words or ((0, -1), (0, -1)) in bad_words


def test_involution_failure_degrees_recorded():
    sigma = generator_from_matrices(0, I3, I3)
    report = check_genericity((sigma,), 2)
    for f in report.failures:
        if f.word == ((0, 1), (0, 1)):
            assert f.expected_degree == 4
            assert f.poly_degree == 1
            assert f.class_degree == 1 or f.class_degree is None


def test_sampled_pair_certifies_to_length_three():
    gens = sample_generators(2, 5, random.Random(1))
    report = check_genericity(gens, 3)
    assert isinstance(report, GenericityReport)
    assert report.distinct_points_ok
    assert report.ok, [f.reason for f in report.failures]
    assert report.words_checked == reduced_word_count(2, 3)


def test_single_generator_certifies():
    (gen,) = sample_generators(1, 5, random.Random(4))
    report = check_genericity((gen,), 4)
    assert report.ok
    assert report.words_checked == reduced_word_count(1, 4)
