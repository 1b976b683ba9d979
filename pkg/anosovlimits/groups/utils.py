def letter_rank(letter):
    "position of a signed generator index in the alphabet 1, -1, 2, -2, ..."
    return 2 * (abs(letter) - 1) + (0 if letter > 0 else 1)


def alphabet(n_generators):
    return [s * i for i in range(1, n_generators + 1) for s in (1, -1)]


def shortlex_key(word):
    "sort key for a word in the generators, eg. a, A, b, B, aa, ab, ..."
    return (len(word), tuple(letter_rank(t) for t in word))


def free_reduce(word):
    "cancel adjacent inverse pairs"
    out = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def format_word(word):
    return ",".join(str(t) for t in word) if word else "e"


def parse_word(s):
    s = s.strip()
    if s == "e":
        return ()
    return tuple(int(t) for t in s.split(","))
