from ..groups.utils import shortlex_key, free_reduce, format_word, parse_word


def apply_shortlex_sort(items):
    return list(sorted(items, key=shortlex_key))


def test_letters_already_sorted():
    assert(apply_shortlex_sort([(1,), (-1,), (2,)]) == [(1,), (-1,), (2,)])


def test_letters_reversed():
    assert(apply_shortlex_sort([(2,), (-1,), (1,)]) == [(1,), (-1,), (2,)])


def test_shorter_words_first():
    assert(apply_shortlex_sort([(1, 1), (-2,), (1,)]) == [(1,), (-2,), (1, 1)])


def test_same_length_words():
    assert(apply_shortlex_sort([(2, 1), (-1, 2), (1, -2)]) == [(1, -2), (-1, 2), (2, 1)])


def test_free_reduce():
    assert(free_reduce((1, 2, -2, -1, 2)) == (2,))
    assert(free_reduce((1, -1)) == ())


def test_word_text():
    assert(format_word(()) == "e")
    assert(parse_word(format_word((1, -2, 3))) == (1, -2, 3))
