"""Bundled synthetic fixtures and generators.

The real corpora (tagged social-media words, Roman/ITRANS/native lexicons,
parallel En-Bn text, a Bengali LM corpus) are not redistributable, so these
small stand-ins exercise every stage end to end.
"""

import numpy as np

from .text import LangTag

EXAMPLE_1 = "Movie ta bhalo chilo but mid point e amar khub boring lagte shuru korlo."
EXAMPLE_2 = "I had to go karon o khub urgently daklo amaye."

# gold tags of the two running examples, punctuation excluded
EXAMPLE_1_TAGS = ["en", "bn", "bn", "bn", "en", "en", "en", "bn", "bn", "bn", "en", "bn", "bn", "bn"]
EXAMPLE_2_TAGS = ["en", "en", "en", "en", "bn", "bn", "bn", "en", "bn", "bn"]

# Roman -> ITRANS
PL_ENTRIES = {
    "ta": "tA", "bhalo": "bhAlo", "chilo": "Chila", "e": "e", "amar": "AmAra",
    "khub": "khuba", "lagte": "lAgate", "shuru": "shuru", "korlo": "karala",
    "karon": "kAraNa", "o": "o", "daklo": "DAkala", "amaye": "AmAYa",
    "ami": "Ami", "achi": "Achi", "tumi": "tumi", "kemon": "kemana", "acho": "Acha",
}

# ITRANS -> native script
BN_TRANS_ENTRIES = {
    "tA": "তা", "bhAlo": "ভালো", "Chila": "ছিল", "e": "এ", "AmAra": "আমার",
    "khuba": "খুব", "lAgate": "লাগতে", "shuru": "শুরু", "karala": "করল",
    "kAraNa": "কারণ", "o": "ও", "DAkala": "ডাকল", "AmAYa": "আমায়",
    "Ami": "আমি", "Achi": "আছি", "tumi": "তুমি", "kemana": "কেমন", "Acha": "আছ",
}

# 20-entry toy lexicon for the character transliteration model
TOY_TRANSLIT = {
    "jol": "জল", "boi": "বই", "gaan": "গান", "bhat": "ভাত", "maach": "মাছ",
    "cha": "চা", "bari": "বাড়ি", "bondhu": "বন্ধু", "aaj": "আজ", "kal": "কাল",
    "ekhon": "এখন", "ghor": "ঘর", "mon": "মন", "din": "দিন", "raat": "রাত",
    "nodi": "নদী", "gram": "গ্রাম", "shohor": "শহর", "kotha": "কথা", "pakhi": "পাখি",
}

# 20 toy En -> Bn pairs; the first five cover the English segments of the examples
TOY_MT = [
    ("movie", "সিনেমা"),
    ("but mid point", "কিন্তু মাঝপথে"),
    ("boring", "বিরক্তিকর"),
    ("i had to go", "আমাকে যেতে হয়েছিল"),
    ("urgently", "জরুরি ভাবে"),
    ("good", "ভালো"),
    ("i am fine", "আমি ভালো আছি"),
    ("thank you", "ধন্যবাদ"),
    ("water", "জল"),
    ("book", "বই"),
    ("song", "গান"),
    ("today", "আজ"),
    ("tomorrow", "কাল"),
    ("very", "খুব"),
    ("house", "বাড়ি"),
    ("rice", "ভাত"),
    ("fish", "মাছ"),
    ("tea", "চা"),
    ("friend", "বন্ধু"),
    ("come here", "এখানে এসো"),
]


def example_tags(example):
    """Gold ``LangTag`` list for :data:`EXAMPLE_1` or :data:`EXAMPLE_2` words."""
    tags = {EXAMPLE_1: EXAMPLE_1_TAGS, EXAMPLE_2: EXAMPLE_2_TAGS}[example]
    return [LangTag.parse(t) for t in tags]


def make_separable_words(n_per_class=200, seed=0, min_len=3, max_len=7):
    """Distinct random words: En over ``a..m``, Bn over ``n..z``.

    Returns a list of ``(word, LangTag)`` alternating classes.
    """
    rng = np.random.default_rng(seed)
    out = []
    pools = {LangTag.En: "abcdefghijklm", LangTag.Bn: "nopqrstuvwxyz"}
    seen = {tag: set() for tag in pools}
    while any(len(s) < n_per_class for s in seen.values()):
        for tag, letters in pools.items():
            if len(seen[tag]) >= n_per_class:
                continue
            length = int(rng.integers(min_len, max_len + 1))
            word = "".join(rng.choice(list(letters), size=length))
            if word not in seen[tag]:
                seen[tag].add(word)
                out.append((word, tag))
    return out


_SUBJECTS = ["আমি", "তুমি", "সে", "আমরা", "তারা", "রাম", "সীতা", "মা"]
_TIMES = ["আজ", "কাল", "এখন", "রোজ", "সকালে", "রাতে"]
_PLACES = ["বাড়িতে", "স্কুলে", "বাজারে", "মাঠে", "অফিসে"]
_OBJECT_VERBS = [
    ("ভাত", "খায়"), ("মাছ", "খায়"), ("চা", "খায়"), ("বই", "পড়ে"),
    ("চিঠি", "লেখে"), ("গান", "শোনে"), ("সিনেমা", "দেখে"), ("ফুটবল", "খেলে"),
    ("জল", "আনে"), ("কাজ", "করে"),
]


def make_lm_corpus(n_sentences=500, seed=0):
    """Synthetic Bengali sentences with a fixed verb-final word order.

    Templates draw subject, optional time/place adverbials and an
    object-verb pair, so every sentence ends in its verb and subjects lead.
    """
    rng = np.random.default_rng(seed)
    templates = [
        ("S", "O", "V"),
        ("S", "T", "O", "V"),
        ("T", "S", "O", "V"),
        ("S", "P", "O", "V"),
        ("S", "T", "P", "O", "V"),
    ]
    sentences = []
    for _ in range(n_sentences):
        template = templates[int(rng.integers(len(templates)))]
        obj, verb = _OBJECT_VERBS[int(rng.integers(len(_OBJECT_VERBS)))]
        fill = {
            "S": _SUBJECTS[int(rng.integers(len(_SUBJECTS)))],
            "T": _TIMES[int(rng.integers(len(_TIMES)))],
            "P": _PLACES[int(rng.integers(len(_PLACES)))],
            "O": obj,
            "V": verb,
        }
        sentences.append([fill[slot] for slot in template])
    return sentences


def scramble_adjacent(sentences, seed=0):
    """Swap one random adjacent pair of distinct tokens in each sentence.

    Returns ``(scrambled, positions)``; sentences without a swappable pair
    are returned unchanged with position ``None``.
    """
    rng = np.random.default_rng(seed)
    scrambled, positions = [], []
    for sent in sentences:
        candidates = [i for i in range(len(sent) - 1) if sent[i] != sent[i + 1]]
        if not candidates:
            scrambled.append(list(sent))
            positions.append(None)
            continue
        i = candidates[int(rng.integers(len(candidates)))]
        s = list(sent)
        s[i], s[i + 1] = s[i + 1], s[i]
        scrambled.append(s)
        positions.append(i)
    return scrambled, positions
