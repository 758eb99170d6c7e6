#!/usr/bin/env python3
"""Build the bundled 50-sentence mini-treebanks and their lexicons.

Writes, for each of en, de, fr, ar and ru, into crates/core/data/mini/:

  <lang>.conllu          50 annotated sentences from a small template grammar
  <lang>.lexicon.tsv     form, lemma, UPOS, FEATS rows covering every lemma

plus en.wiktextract.jsonl and fr.wiktextract.jsonl with pronunciation data
for the article rules. Output is deterministic.

Usage: python3 tools/make_mini_treebanks.py [OUT_DIR]
"""

import json
import random
import sys
from pathlib import Path

N_SENTENCES = 50


def feats_str(feats):
    if not feats:
        return "_"
    return "|".join(f"{k}={v}" for k, v in sorted(feats.items(), key=lambda kv: (kv[0].lower(), kv[0])))


def parse_feats(s):
    if not s or s == "_":
        return {}
    return dict(p.split("=", 1) for p in s.split("|"))


class Tok:
    def __init__(self, form, lemma, upos, feats, head, deprel, space=True):
        self.form = form
        self.lemma = lemma
        self.upos = upos
        self.feats = parse_feats(feats) if isinstance(feats, str) else dict(feats)
        self.head = head
        self.deprel = deprel
        self.space = space


def render(sent_id, toks, mwts=(), text=None):
    """toks: list of Tok with 1-based heads. mwts: (start, end, form, space)."""
    starts = {m[0]: m for m in mwts}
    covered = {i for m in mwts for i in range(m[0], m[1] + 1)}
    if text is None:
        parts = []
        i = 1
        while i <= len(toks):
            if i in starts:
                s, e, form, space = starts[i]
                parts.append(form + (" " if space else ""))
                i = e + 1
                continue
            t = toks[i - 1]
            parts.append(t.form + (" " if t.space else ""))
            i += 1
        text = "".join(parts).rstrip()
    lines = [f"# sent_id = {sent_id}", f"# text = {text}"]
    for i, t in enumerate(toks, start=1):
        if i in starts:
            s, e, form, space = starts[i]
            lines.append(f"{s}-{e}\t{form}\t_\t_\t_\t_\t_\t_\t_\t{'_' if space else 'SpaceAfter=No'}")
        misc = "_" if (t.space or i in covered) else "SpaceAfter=No"
        lines.append(
            "\t".join([str(i), t.form, t.lemma, t.upos, "_", feats_str(t.feats), str(t.head), t.deprel, "_", misc])
        )
    return "\n".join(lines) + "\n\n"


class Lex:
    def __init__(self):
        self.rows = set()

    def add(self, form, lemma, upos, feats):
        f = feats if isinstance(feats, str) else feats_str(feats)
        self.rows.add((form, lemma, upos, f))

    def write(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            for row in sorted(self.rows):
                fh.write("\t".join(row) + "\n")


def cap(s):
    return s[:1].upper() + s[1:]


# ---------------------------------------------------------------- English

EN_NOUNS = [
    # lemma, plural, vowel-initial sound
    ("service", "services", False), ("interior", "interiors", True), ("apple", "apples", True),
    ("bicycle", "bicycles", False), ("hour", "hours", True), ("university", "universities", False),
    ("dog", "dogs", False), ("house", "houses", False), ("idea", "ideas", True), ("car", "cars", False),
    ("book", "books", False), ("garden", "gardens", False), ("umbrella", "umbrellas", True),
    ("owl", "owls", True), ("table", "tables", False), ("student", "students", False),
    ("teacher", "teachers", False), ("window", "windows", False), ("engine", "engines", True),
    ("orange", "oranges", True),
]
EN_ADJS = [
    ("friendly", False), ("fast", False), ("nuclear", False), ("fresh", False), ("old", True),
    ("new", False), ("green", False), ("quiet", False), ("honest", True), ("useful", False),
    ("odd", True), ("big", False), ("small", False), ("ancient", True), ("easy", True),
]
EN_VERBS = [
    # lemma, 3sg, past, transitive
    ("see", "sees", "saw", True), ("eat", "eats", "ate", True), ("build", "builds", "built", True),
    ("open", "opens", "opened", True), ("find", "finds", "found", True), ("like", "likes", "liked", True),
    ("paint", "paints", "painted", True), ("visit", "visits", "visited", True),
    ("watch", "watches", "watched", True), ("carry", "carries", "carried", True),
    ("sing", "sings", "sang", False), ("run", "runs", "ran", False), ("sleep", "sleeps", "slept", False),
    ("arrive", "arrives", "arrived", False), ("wait", "waits", "waited", False),
    ("laugh", "laughs", "laughed", False),
]
EN_ADVS = ["quickly", "loudly", "slowly", "often", "always", "happily", "quietly", "rarely"]
EN_PROPN = ["Mary", "John", "London", "Paris", "Anna", "Oxford"]

EN_SG = "Number=Sing"
EN_PL = "Number=Plur"
EN_3SG = "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin"
EN_PRES = "Mood=Ind|Tense=Pres|VerbForm=Fin"
EN_PAST = "Mood=Ind|Tense=Past|VerbForm=Fin"
EN_DEF = "Definite=Def|PronType=Art"
EN_IND = "Definite=Ind|PronType=Art"


def english(rng):
    lex = Lex()
    vowel = {}
    for lemma, pl, v in EN_NOUNS:
        lex.add(lemma, lemma, "NOUN", EN_SG)
        lex.add(pl, lemma, "NOUN", EN_PL)
        vowel[lemma] = v
    for lemma, v in EN_ADJS:
        lex.add(lemma, lemma, "ADJ", "Degree=Pos")
        vowel[lemma] = v
    for lemma, s3, past, _ in EN_VERBS:
        lex.add(lemma, lemma, "VERB", "VerbForm=Inf")
        lex.add(lemma, lemma, "VERB", EN_PRES)
        lex.add(s3, lemma, "VERB", EN_3SG)
        lex.add(past, lemma, "VERB", EN_PAST)
    for adv in EN_ADVS:
        lex.add(adv, adv, "ADV", "_")
    for p in EN_PROPN:
        lex.add(p, p, "PROPN", EN_SG)

    def art(word):
        return "an" if vowel[word] else "a"

    trans = [v for v in EN_VERBS if v[3]]
    intrans = [v for v in EN_VERBS if not v[3]]
    out = []
    for k in range(N_SENTENCES):
        t = k % 6
        n1, n2 = rng.sample(EN_NOUNS, 2)
        a1, a2 = rng.sample(EN_ADJS, 2)
        if k == 0:
            toks = [Tok("The", "the", "DET", EN_DEF, 2, "det"), Tok("service", "service", "NOUN", EN_SG, 4, "nsubj"),
                    Tok("was", "be", "AUX", EN_PAST, 4, "cop"), Tok("friendly", "friendly", "ADJ", "Degree=Pos", 0, "root"),
                    Tok("and", "and", "CCONJ", "_", 6, "cc"), Tok("fast", "fast", "ADJ", "Degree=Pos", 4, "conj"),
                    Tok(".", ".", "PUNCT", "_", 4, "punct")]
            toks[5].space = False
        elif t == 0:
            toks = [Tok("The", "the", "DET", EN_DEF, 2, "det"), Tok(n1[0], n1[0], "NOUN", EN_SG, 4, "nsubj"),
                    Tok("was", "be", "AUX", EN_PAST, 4, "cop"), Tok(a1[0], a1[0], "ADJ", "Degree=Pos", 0, "root"),
                    Tok("and", "and", "CCONJ", "_", 6, "cc"), Tok(a2[0], a2[0], "ADJ", "Degree=Pos", 4, "conj", False),
                    Tok(".", ".", "PUNCT", "_", 4, "punct")]
        elif t == 1:
            v = rng.choice(trans)
            toks = [Tok("The", "the", "DET", EN_DEF, 3, "det"), Tok(a1[0], a1[0], "ADJ", "Degree=Pos", 3, "amod"),
                    Tok(n1[0], n1[0], "NOUN", EN_SG, 4, "nsubj"), Tok(v[2], v[0], "VERB", EN_PAST, 0, "root"),
                    Tok("the", "the", "DET", EN_DEF, 6, "det"), Tok(n2[0], n2[0], "NOUN", EN_SG, 4, "obj", False),
                    Tok(".", ".", "PUNCT", "_", 4, "punct")]
        elif t == 2:
            v = rng.choice(intrans)
            p = rng.choice(EN_PROPN)
            adv = rng.choice(EN_ADVS)
            toks = [Tok(p, p, "PROPN", EN_SG, 2, "nsubj"), Tok(v[1], v[0], "VERB", EN_3SG, 0, "root"),
                    Tok(adv, adv, "ADV", "_", 2, "advmod", False), Tok(".", ".", "PUNCT", "_", 2, "punct")]
        elif t == 3:
            v = rng.choice(trans)
            a = art(n1[0])
            toks = [Tok("She", "she", "PRON", "Case=Nom|Gender=Fem|Number=Sing|Person=3|PronType=Prs", 2, "nsubj"),
                    Tok(v[2], v[0], "VERB", EN_PAST, 0, "root"), Tok(a, "a", "DET", EN_IND, 4, "det"),
                    Tok(n1[0], n1[0], "NOUN", EN_SG, 2, "obj", False), Tok(".", ".", "PUNCT", "_", 2, "punct")]
        elif t == 4:
            v = rng.choice(intrans)
            toks = [Tok("The", "the", "DET", EN_DEF, 2, "det"), Tok(n1[1], n1[0], "NOUN", EN_PL, 3, "nsubj"),
                    Tok(v[0], v[0], "VERB", EN_PRES, 0, "root"), Tok("in", "in", "ADP", "_", 6, "case"),
                    Tok("the", "the", "DET", EN_DEF, 6, "det"), Tok(n2[0], n2[0], "NOUN", EN_SG, 3, "obl", False),
                    Tok(".", ".", "PUNCT", "_", 3, "punct")]
        else:
            v = rng.choice(trans)
            p = rng.choice(EN_PROPN)
            a = art(a1[0])
            toks = [Tok(p, p, "PROPN", EN_SG, 2, "nsubj"), Tok(v[2], v[0], "VERB", EN_PAST, 0, "root"),
                    Tok(a, "a", "DET", EN_IND, 5, "det"), Tok(a1[0], a1[0], "ADJ", "Degree=Pos", 5, "amod"),
                    Tok(n1[0], n1[0], "NOUN", EN_SG, 2, "obj"), Tok("again", "again", "ADV", "_", 2, "advmod", False),
                    Tok(".", ".", "PUNCT", "_", 2, "punct")]
        out.append(render(f"en-mini-{k + 1:02d}", toks))

    ipa = {
        "apple": "/ˈæp.əl/", "bicycle": "/ˈbaɪ.sɪ.kəl/", "hour": "/ˈaʊ.ɚ/", "university": "/ˌjuː.nɪˈvɝː.sə.ti/",
        "umbrella": "/ʌmˈbɹɛl.ə/", "owl": "/aʊl/", "orange": "/ˈɒɹ.ɪndʒ/", "honest": "/ˈɒn.ɪst/",
        "idea": "/aɪˈdɪə/", "engine": "/ˈɛn.dʒɪn/", "interior": "/ɪnˈtɪə.ɹi.ə/", "useful": "/ˈjuːs.fəl/",
        "old": "/əʊld/", "odd": "/ɒd/", "ancient": "/ˈeɪn.ʃənt/", "easy": "/ˈiː.zi/",
    }
    plural = {lemma: pl for lemma, pl, _ in EN_NOUNS}
    wikt = []
    for word, pron in ipa.items():
        pos = "noun" if word in plural else "adj"
        forms = [{"form": plural[word], "tags": ["plural"]}] if word in plural else []
        wikt.append({"word": word, "lang_code": "en", "pos": pos, "forms": forms, "sounds": [{"ipa": pron}]})
    return out, lex, wikt


# ---------------------------------------------------------------- German

DE_NOUNS = [
    # lemma, gender, plural
    ("Mann", "Masc", "Männer"), ("Hund", "Masc", "Hunde"), ("Tisch", "Masc", "Tische"), ("Garten", "Masc", "Gärten"),
    ("Lehrer", "Masc", "Lehrer"), ("Baum", "Masc", "Bäume"),
    ("Frau", "Fem", "Frauen"), ("Katze", "Fem", "Katzen"), ("Stadt", "Fem", "Städte"), ("Blume", "Fem", "Blumen"),
    ("Lampe", "Fem", "Lampen"), ("Tür", "Fem", "Türen"),
    ("Kind", "Neut", "Kinder"), ("Haus", "Neut", "Häuser"), ("Buch", "Neut", "Bücher"), ("Auto", "Neut", "Autos"),
    ("Fenster", "Neut", "Fenster"), ("Bild", "Neut", "Bilder"),
]
DE_ADJS = ["alt", "neu", "klein", "groß", "schön", "rot", "grün", "laut", "leise", "kalt", "warm", "hell"]
DE_TRANS = [("sehen", "sieht", "sehen"), ("finden", "findet", "finden"), ("kaufen", "kauft", "kaufen"),
            ("malen", "malt", "malen"), ("suchen", "sucht", "suchen"), ("tragen", "trägt", "tragen")]
DE_INTRANS = [("schlafen", "schläft", "schlafen"), ("singen", "singt", "singen"), ("warten", "wartet", "warten"),
              ("lachen", "lacht", "lachen"), ("arbeiten", "arbeitet", "arbeiten")]
DE_ADVS = ["oft", "heute", "gern", "immer", "selten", "dort"]
DE_PROPN = ["Anna", "Peter", "Berlin", "Maria", "Thomas"]

DE_DEF = {("Nom", "Masc"): "der", ("Nom", "Fem"): "die", ("Nom", "Neut"): "das", ("Nom", "Plur"): "die",
          ("Acc", "Masc"): "den", ("Acc", "Fem"): "die", ("Acc", "Neut"): "das", ("Acc", "Plur"): "die",
          ("Dat", "Masc"): "dem", ("Dat", "Fem"): "der", ("Dat", "Neut"): "dem", ("Dat", "Plur"): "den"}
DE_INDEF = {("Nom", "Masc"): "ein", ("Nom", "Fem"): "eine", ("Nom", "Neut"): "ein",
            ("Acc", "Masc"): "einen", ("Acc", "Fem"): "eine", ("Acc", "Neut"): "ein"}
DE_STRONG = {("Nom", "Masc"): "er", ("Nom", "Fem"): "e", ("Nom", "Neut"): "es", ("Nom", "Plur"): "e",
             ("Acc", "Masc"): "en", ("Acc", "Fem"): "e", ("Acc", "Neut"): "es", ("Acc", "Plur"): "e",
             ("Dat", "Masc"): "em", ("Dat", "Fem"): "er", ("Dat", "Neut"): "em", ("Dat", "Plur"): "en"}
DE_WEAK = {("Nom", "Masc"): "e", ("Nom", "Fem"): "e", ("Nom", "Neut"): "e", ("Nom", "Plur"): "en",
           ("Acc", "Masc"): "en", ("Acc", "Fem"): "e", ("Acc", "Neut"): "e", ("Acc", "Plur"): "en",
           ("Dat", "Masc"): "en", ("Dat", "Fem"): "en", ("Dat", "Neut"): "en", ("Dat", "Plur"): "en"}
DE_MIXED = {("Nom", "Masc"): "er", ("Nom", "Fem"): "e", ("Nom", "Neut"): "es",
            ("Acc", "Masc"): "en", ("Acc", "Fem"): "e", ("Acc", "Neut"): "es"}


def de_stem(adj):
    return {"leise": "leis"}.get(adj, adj)


def de_noun_feats(case, gender):
    if gender == "Plur":
        return {"Case": case, "Number": "Plur"}
    return {"Case": case, "Gender": gender, "Number": "Sing"}


def de_adj_feats(case, gender):
    f = de_noun_feats(case, gender)
    f["Degree"] = "Pos"
    return f


def de_art_feats(case, gender, definite):
    f = de_noun_feats(case, gender)
    f["Definite"] = "Def" if definite else "Ind"
    f["PronType"] = "Art"
    return f


def german(rng):
    lex = Lex()
    for lemma, g, pl in DE_NOUNS:
        for case in ("Nom", "Acc", "Dat"):
            sg = lemma
            lex.add(sg, lemma, "NOUN", de_noun_feats(case, g))
            plf = pl + ("n" if case == "Dat" and not pl.endswith(("n", "s")) else "")
            lex.add(plf, lemma, "NOUN", de_noun_feats(case, "Plur"))
    for adj in DE_ADJS:
        lex.add(adj, adj, "ADJ", "Degree=Pos")
        for table in (DE_STRONG, DE_WEAK, DE_MIXED):
            for (case, g), end in table.items():
                lex.add(de_stem(adj) + end, adj, "ADJ", de_adj_feats(case, g))
    pres3 = "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin"
    pres3pl = "Mood=Ind|Number=Plur|Person=3|Tense=Pres|VerbForm=Fin"
    for lemma, s3, p3 in DE_TRANS + DE_INTRANS:
        lex.add(lemma, lemma, "VERB", "VerbForm=Inf")
        lex.add(s3, lemma, "VERB", pres3)
        lex.add(p3, lemma, "VERB", pres3pl)
    for adv in DE_ADVS:
        lex.add(adv, adv, "ADV", "_")
    for p in DE_PROPN:
        lex.add(p, p, "PROPN", "Case=Nom|Number=Sing")

    def noun(gender=None):
        cands = [n for n in DE_NOUNS if gender is None or n[1] == gender]
        return rng.choice(cands)

    out = []
    for k in range(N_SENTENCES):
        t = k % 5
        adj = rng.choice(DE_ADJS)
        mwts = []
        if t == 0:
            # Der alte Mann schläft oft .
            lemma, g, _ = noun()
            v = rng.choice(DE_INTRANS)
            adv = rng.choice(DE_ADVS)
            d = DE_DEF[("Nom", g)]
            toks = [Tok(cap(d), "der", "DET", de_art_feats("Nom", g, True), 3, "det"),
                    Tok(de_stem(adj) + DE_WEAK[("Nom", g)], adj, "ADJ", de_adj_feats("Nom", g), 3, "amod"),
                    Tok(lemma, lemma, "NOUN", de_noun_feats("Nom", g), 4, "nsubj"),
                    Tok(v[1], v[0], "VERB", pres3, 0, "root"), Tok(adv, adv, "ADV", "_", 4, "advmod", False),
                    Tok(".", ".", "PUNCT", "_", 4, "punct")]
        elif t == 1:
            # Die kleinen Kinder sehen den Baum .
            lemma, g, pl = noun()
            o_lemma, og, _ = noun()
            v = rng.choice(DE_TRANS)
            toks = [Tok("Die", "der", "DET", de_art_feats("Nom", "Plur", True), 3, "det"),
                    Tok(de_stem(adj) + "en", adj, "ADJ", de_adj_feats("Nom", "Plur"), 3, "amod"),
                    Tok(pl, lemma, "NOUN", de_noun_feats("Nom", "Plur"), 4, "nsubj"),
                    Tok(v[2], v[0], "VERB", pres3pl, 0, "root"),
                    Tok(DE_DEF[("Acc", og)], "der", "DET", de_art_feats("Acc", og, True), 6, "det"),
                    Tok(o_lemma, o_lemma, "NOUN", de_noun_feats("Acc", og), 4, "obj", False),
                    Tok(".", ".", "PUNCT", "_", 4, "punct")]
        elif t == 2:
            # Anna kauft einen roten Tisch .
            lemma, g, _ = noun()
            v = rng.choice(DE_TRANS)
            p = rng.choice(DE_PROPN)
            toks = [Tok(p, p, "PROPN", "Case=Nom|Number=Sing", 2, "nsubj"), Tok(v[1], v[0], "VERB", pres3, 0, "root"),
                    Tok(DE_INDEF[("Acc", g)], "ein", "DET", de_art_feats("Acc", g, False), 5, "det"),
                    Tok(de_stem(adj) + DE_MIXED[("Acc", g)], adj, "ADJ", de_adj_feats("Acc", g), 5, "amod"),
                    Tok(lemma, lemma, "NOUN", de_noun_feats("Acc", g), 2, "obj", False),
                    Tok(".", ".", "PUNCT", "_", 2, "punct")]
        elif t == 3:
            # Peter arbeitet im alten Haus .   (im = in + dem)
            lemma, g, _ = noun(rng.choice(["Masc", "Neut"]))
            v = rng.choice(DE_INTRANS)
            p = rng.choice(DE_PROPN)
            toks = [Tok(p, p, "PROPN", "Case=Nom|Number=Sing", 2, "nsubj"), Tok(v[1], v[0], "VERB", pres3, 0, "root"),
                    Tok("in", "in", "ADP", "_", 6, "case"),
                    Tok("dem", "der", "DET", de_art_feats("Dat", g, True), 6, "det"),
                    Tok(de_stem(adj) + "en", adj, "ADJ", de_adj_feats("Dat", g), 6, "amod"),
                    Tok(lemma, lemma, "NOUN", de_noun_feats("Dat", g), 2, "obl", False),
                    Tok(".", ".", "PUNCT", "_", 2, "punct")]
            mwts = [(3, 4, "im", True)]
        else:
            # Das Buch ist schön .
            lemma, g, _ = noun()
            d = DE_DEF[("Nom", g)]
            toks = [Tok(cap(d), "der", "DET", de_art_feats("Nom", g, True), 2, "det"),
                    Tok(lemma, lemma, "NOUN", de_noun_feats("Nom", g), 4, "nsubj"),
                    Tok("ist", "sein", "AUX", pres3, 4, "cop"),
                    Tok(adj, adj, "ADJ", "Degree=Pos", 0, "root", False),
                    Tok(".", ".", "PUNCT", "_", 4, "punct")]
        out.append(render(f"de-mini-{k + 1:02d}", toks, mwts))
    return out, lex


# ---------------------------------------------------------------- French

FR_NOUNS = [
    # lemma, gender, plural
    ("livre", "Masc", "livres"), ("arbre", "Masc", "arbres"), ("homme", "Masc", "hommes"), ("chat", "Masc", "chats"),
    ("jardin", "Masc", "jardins"), ("hôtel", "Masc", "hôtels"), ("oiseau", "Masc", "oiseaux"),
    ("héros", "Masc", "héros"), ("avion", "Masc", "avions"), ("enfant", "Masc", "enfants"),
    ("hibou", "Masc", "hiboux"),
    ("maison", "Fem", "maisons"), ("voiture", "Fem", "voitures"), ("idée", "Fem", "idées"), ("table", "Fem", "tables"),
    ("fleur", "Fem", "fleurs"), ("école", "Fem", "écoles"), ("histoire", "Fem", "histoires"),
    ("église", "Fem", "églises"), ("porte", "Fem", "portes"),
]
FR_PRE = [("petit", "petite", "petits"), ("grand", "grande", "grands"), ("jeune", "jeune", "jeunes"),
          ("bon", "bonne", "bons"), ("joli", "jolie", "jolis"), ("gros", "grosse", "gros")]
FR_POST = [("rouge", "rouge", "rouges"), ("rapide", "rapide", "rapides"), ("noir", "noire", "noirs"),
           ("heureux", "heureuse", "heureux"), ("facile", "facile", "faciles"), ("important", "importante", "importants"),
           ("intéressant", "intéressante", "intéressants")]
FR_TRANS = ["manger", "regarder", "aimer", "chercher", "trouver", "porter", "dessiner", "visiter"]
FR_INTRANS = [("dormir", "dort", "dorment"), ("arriver", "arrive", "arrivent"), ("parler", "parle", "parlent"),
              ("chanter", "chante", "chantent"), ("travailler", "travaille", "travaillent")]
FR_ADVS = ["souvent", "toujours", "bien", "lentement", "ici", "ensuite"]
FR_PROPN = ["Marie", "Anne", "Paul", "Émile", "Louis", "Isabelle"]

FR_VOWEL = set("aeiouéèêâîôûh")
FR_ASPIRATED = {"héros", "hibou"}


def fr_elides(word):
    return word[0].lower() in FR_VOWEL and word.lower() not in FR_ASPIRATED


def fr_noun_feats(g, num):
    return {"Gender": g, "Number": num}


def french(rng):
    lex = Lex()
    for lemma, g, pl in FR_NOUNS:
        lex.add(lemma, lemma, "NOUN", fr_noun_feats(g, "Sing"))
        lex.add(pl, lemma, "NOUN", fr_noun_feats(g, "Plur"))
    for m, f, mp in FR_PRE + FR_POST:
        fp = f + "s" if not f.endswith("s") else f
        if m == "heureux":
            fp = "heureuses"
        lex.add(m, m, "ADJ", fr_noun_feats("Masc", "Sing"))
        lex.add(f, m, "ADJ", fr_noun_feats("Fem", "Sing"))
        lex.add(mp, m, "ADJ", fr_noun_feats("Masc", "Plur"))
        lex.add(fp, m, "ADJ", fr_noun_feats("Fem", "Plur"))
    s3 = "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin"
    p3 = "Mood=Ind|Number=Plur|Person=3|Tense=Pres|VerbForm=Fin"
    for v in FR_TRANS:
        stem = v[:-2]
        lex.add(v, v, "VERB", "VerbForm=Inf")
        lex.add(stem + "e", v, "VERB", s3)
        lex.add(stem + "ent", v, "VERB", p3)
    for v, a, b in FR_INTRANS:
        lex.add(v, v, "VERB", "VerbForm=Inf")
        lex.add(a, v, "VERB", s3)
        lex.add(b, v, "VERB", p3)
    for adv in FR_ADVS:
        lex.add(adv, adv, "ADV", "_")
    for p in FR_PROPN:
        lex.add(p, p, "PROPN", "_")

    def def_art(word, g, capital=False):
        """Definite article tokens before `word`: (form, feats, space)."""
        if fr_elides(word):
            form = "l'"
            feats = "Definite=Def|Number=Sing|PronType=Art"
            space = False
        else:
            form = "le" if g == "Masc" else "la"
            feats = f"Definite=Def|Gender={g}|Number=Sing|PronType=Art"
            space = True
        return (cap(form) if capital else form), feats, space

    def noun(gender=None):
        return rng.choice([n for n in FR_NOUNS if gender is None or n[1] == gender])

    def adj_form(a, g, num):
        m, f, mp = a
        if num == "Sing":
            return m if g == "Masc" else f
        if g == "Masc":
            return mp
        return "heureuses" if m == "heureux" else (f + "s" if not f.endswith("s") else f)

    out = []
    for k in range(N_SENTENCES):
        t = k % 5
        mwts = []
        if t == 0:
            # La maison est rouge .
            lemma, g, _ = noun()
            a = rng.choice(FR_PRE + FR_POST)
            form, feats, space = def_art(lemma, g, True)
            toks = [Tok(form, "le", "DET", feats, 2, "det", space), Tok(lemma, lemma, "NOUN", fr_noun_feats(g, "Sing"), 4, "nsubj"),
                    Tok("est", "être", "AUX", s3, 4, "cop"),
                    Tok(adj_form(a, g, "Sing"), a[0], "ADJ", fr_noun_feats(g, "Sing"), 0, "root"),
                    Tok(".", ".", "PUNCT", "_", 4, "punct")]
        elif t == 1:
            # Le petit chat regarde la fleur rouge .
            lemma, g, _ = noun()
            o_lemma, og, _ = noun()
            pre = rng.choice(FR_PRE)
            post = rng.choice(FR_POST)
            pre_form = adj_form(pre, g, "Sing")
            form, feats, space = def_art(pre_form, g, True)
            v = rng.choice(FR_TRANS)
            oform, ofeats, ospace = def_art(o_lemma, og)
            toks = [Tok(form, "le", "DET", feats, 3, "det", space),
                    Tok(pre_form, pre[0], "ADJ", fr_noun_feats(g, "Sing"), 3, "amod"),
                    Tok(lemma, lemma, "NOUN", fr_noun_feats(g, "Sing"), 4, "nsubj"),
                    Tok(v[:-2] + "e", v, "VERB", s3, 0, "root"),
                    Tok(oform, "le", "DET", ofeats, 6, "det", ospace),
                    Tok(o_lemma, o_lemma, "NOUN", fr_noun_feats(og, "Sing"), 4, "obj"),
                    Tok(adj_form(post, og, "Sing"), post[0], "ADJ", fr_noun_feats(og, "Sing"), 6, "amod"),
                    Tok(".", ".", "PUNCT", "_", 4, "punct")]
        elif t == 2:
            # Marie parle du livre .   (du = de + le)
            lemma, g, _ = noun("Masc")
            while fr_elides(lemma):
                lemma, g, _ = noun("Masc")
            p = rng.choice(FR_PROPN)
            toks = [Tok(p, p, "PROPN", "_", 2, "nsubj"), Tok("parle", "parler", "VERB", s3, 0, "root"),
                    Tok("de", "de", "ADP", "_", 5, "case"),
                    Tok("le", "le", "DET", "Definite=Def|Gender=Masc|Number=Sing|PronType=Art", 5, "det"),
                    Tok(lemma, lemma, "NOUN", fr_noun_feats(g, "Sing"), 2, "obl"),
                    Tok(".", ".", "PUNCT", "_", 2, "punct")]
            mwts = [(3, 4, "du", True)]
        elif t == 3:
            # Les enfants heureux dorment souvent .
            lemma, g, pl = noun()
            post = rng.choice(FR_POST)
            v = rng.choice(FR_INTRANS)
            adv = rng.choice(FR_ADVS)
            toks = [Tok("Les", "le", "DET", "Definite=Def|Number=Plur|PronType=Art", 2, "det"),
                    Tok(pl, lemma, "NOUN", fr_noun_feats(g, "Plur"), 4, "nsubj"),
                    Tok(adj_form(post, g, "Plur"), post[0], "ADJ", fr_noun_feats(g, "Plur"), 2, "amod"),
                    Tok(v[2], v[0], "VERB", p3, 0, "root"), Tok(adv, adv, "ADV", "_", 4, "advmod"),
                    Tok(".", ".", "PUNCT", "_", 4, "punct")]
        else:
            # Le chat d'Anne dort .
            lemma, g, _ = noun()
            p = rng.choice(FR_PROPN)
            v = rng.choice(FR_INTRANS)
            form, feats, space = def_art(lemma, g, True)
            de = "d'" if fr_elides(p) else "de"
            toks = [Tok(form, "le", "DET", feats, 2, "det", space),
                    Tok(lemma, lemma, "NOUN", fr_noun_feats(g, "Sing"), 5, "nsubj"),
                    Tok(de, "de", "ADP", "_", 4, "case", de == "de"),
                    Tok(p, p, "PROPN", "_", 2, "nmod"),
                    Tok(v[1], v[0], "VERB", s3, 0, "root"),
                    Tok(".", ".", "PUNCT", "_", 5, "punct")]
        toks[-2].space = False
        out.append(render(f"fr-mini-{k + 1:02d}", toks, mwts))

    wikt = [
        {"word": "héros", "lang_code": "fr", "pos": "noun", "sounds": [{"ipa": "/ˈe.ʁo/"}],
         "categories": ["French words with aspirated h"]},
        {"word": "hibou", "lang_code": "fr", "pos": "noun", "forms": [{"form": "hiboux", "tags": ["plural"]}],
         "sounds": [{"ipa": "/ʔi.bu/"}]},
        {"word": "homme", "lang_code": "fr", "pos": "noun", "forms": [{"form": "hommes", "tags": ["plural"]}],
         "sounds": [{"ipa": "/ɔm/"}]},
        {"word": "hôtel", "lang_code": "fr", "pos": "noun", "sounds": [{"ipa": "/o.tɛl/"}]},
        {"word": "histoire", "lang_code": "fr", "pos": "noun", "sounds": [{"ipa": "/is.twaʁ/"}]},
        {"word": "arbre", "lang_code": "fr", "pos": "noun", "sounds": [{"ipa": "/aʁbʁ/"}]},
        {"word": "livre", "lang_code": "fr", "pos": "noun", "sounds": [{"ipa": "/livʁ/"}]},
    ]
    return out, lex, wikt


# ---------------------------------------------------------------- Arabic

# (vocalized lemma, undiacritized stem)
AR_NOUNS = [("وَلَد", "ولد"), ("رَجُل", "رجل"), ("كِتَاب", "كتاب"), ("دَرْس", "درس"), ("بَيْت", "بيت"),
            ("بَاب", "باب"), ("قَلَم", "قلم"), ("طَالِب", "طالب"), ("مُعَلِّم", "معلم"), ("سُوق", "سوق")]
AR_TRANS = [("كَتَبَ", "كتب"), ("قَرَأَ", "قرأ"), ("فَتَحَ", "فتح"), ("أَخَذَ", "أخذ"), ("حَمَلَ", "حمل")]
AR_INTRANS = [("نَامَ", "نام"), ("جَلَسَ", "جلس"), ("ذَهَبَ", "ذهب"), ("ضَحِكَ", "ضحك")]
AR_ADJS = [("كَبِير", "كبير"), ("صَغِير", "صغير"), ("جَدِيد", "جديد"), ("قَدِيم", "قديم"),
           ("جَمِيل", "جميل"), ("طَوِيل", "طويل")]
AR_CASE_MARK = {"Nom": "ُ", "Acc": "َ", "Gen": "ِ"}
AR_VERB = "Aspect=Perf|Gender=Masc|Mood=Ind|Number=Sing|Person=3|Voice=Act"


def ar_def(case):
    return {"Case": case, "Definite": "Def", "Gender": "Masc", "Number": "Sing"}


def arabic(rng):
    lex = Lex()
    for lemma, stem in AR_NOUNS + AR_ADJS:
        upos = "ADJ" if (lemma, stem) in AR_ADJS else "NOUN"
        for case, mark in AR_CASE_MARK.items():
            lex.add("ال" + stem + mark, lemma, upos, ar_def(case))
            ind = {"Case": case, "Definite": "Ind", "Gender": "Masc", "Number": "Sing"}
            lex.add(stem, lemma, upos, ind)
    for lemma, stem in AR_TRANS + AR_INTRANS:
        lex.add(lemma, lemma, "VERB", AR_VERB)

    out = []
    for k in range(N_SENTENCES):
        t = k % 4
        n1, n2 = rng.sample(AR_NOUNS, 2)
        mwts = []
        if t == 0:
            # قَرَأَ الوَلَدُ الكِتَابَ .
            v = rng.choice(AR_TRANS)
            toks = [Tok(v[0], v[0], "VERB", AR_VERB, 0, "root"),
                    Tok("ال" + n1[1] + AR_CASE_MARK["Nom"], n1[0], "NOUN", ar_def("Nom"), 1, "nsubj"),
                    Tok("ال" + n2[1] + AR_CASE_MARK["Acc"], n2[0], "NOUN", ar_def("Acc"), 1, "obj", False),
                    Tok(".", ".", "PUNCT", "_", 1, "punct")]
        elif t == 1:
            # نَامَ الوَلَدُ الصَّغِيرُ .
            v = rng.choice(AR_INTRANS)
            a = rng.choice(AR_ADJS)
            toks = [Tok(v[0], v[0], "VERB", AR_VERB, 0, "root"),
                    Tok("ال" + n1[1] + AR_CASE_MARK["Nom"], n1[0], "NOUN", ar_def("Nom"), 1, "nsubj"),
                    Tok("ال" + a[1] + AR_CASE_MARK["Nom"], a[0], "ADJ", ar_def("Nom"), 2, "amod", False),
                    Tok(".", ".", "PUNCT", "_", 1, "punct")]
        elif t == 2:
            # وكتب المعلم الدرس .   (و + verb as one orthographic word)
            v = rng.choice(AR_TRANS)
            toks = [Tok("وَ", "وَ", "CCONJ", "_", 2, "cc"), Tok(v[0], v[0], "VERB", AR_VERB, 0, "root"),
                    Tok("ال" + n1[1], n1[0], "NOUN", ar_def("Nom"), 2, "nsubj"),
                    Tok("ال" + n2[1], n2[0], "NOUN", ar_def("Acc"), 2, "obj", False),
                    Tok(".", ".", "PUNCT", "_", 2, "punct")]
            mwts = [(1, 2, "وَ" + v[0], True)]
        else:
            # جلس الرجل في البيت .
            v = rng.choice(AR_INTRANS)
            toks = [Tok(v[0], v[0], "VERB", AR_VERB, 0, "root"),
                    Tok("ال" + n1[1], n1[0], "NOUN", ar_def("Nom"), 1, "nsubj"),
                    Tok("فِي", "فِي", "ADP", "_", 4, "case"),
                    Tok("ال" + n2[1] + AR_CASE_MARK["Gen"], n2[0], "NOUN", ar_def("Gen"), 1, "obl", False),
                    Tok(".", ".", "PUNCT", "_", 1, "punct")]
        out.append(render(f"ar-mini-{k + 1:02d}", toks, mwts))
    return out, lex


# ---------------------------------------------------------------- Russian

RU_SUBJ = [("кот", "кота"), ("брат", "брата"), ("мальчик", "мальчика"), ("друг", "друга"), ("студент", "студента"),
           ("сосед", "соседа")]
RU_FEM = ["книга", "газета", "школа", "машина", "комната", "картина", "лампа"]
RU_LOC = ["дом", "город", "парк", "магазин", "театр", "институт"]
RU_ADJS = [("старый", "стар"), ("новый", "нов"), ("белый", "бел"), ("красивый", "красив"), ("умный", "умн"),
           ("добрый", "добр")]
RU_TRANS = [("читать", "читает", "читал"), ("знать", "знает", "знал"), ("делать", "делает", "делал"),
            ("слушать", "слушает", "слушал"), ("покупать", "покупает", "покупал"), ("открывать", "открывает", "открывал")]
RU_INTRANS = [("гулять", "гуляет", "гулял"), ("работать", "работает", "работал"), ("отдыхать", "отдыхает", "отдыхал"),
              ("спать", "спит", "спал")]
RU_ADVS = ["часто", "вчера", "долго", "быстро", "редко", "сегодня"]
RU_PROPN = ["Иван", "Мария", "Анна", "Пётр"]

RU_PRES = "Aspect=Imp|Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin|Voice=Act"
RU_PAST = "Aspect=Imp|Gender=Masc|Mood=Ind|Number=Sing|Tense=Past|VerbForm=Fin|Voice=Act"


def ru_feats(case, gender, animacy=None):
    f = {"Case": case, "Gender": gender, "Number": "Sing"}
    if animacy:
        f["Animacy"] = animacy
    return f


def russian(rng):
    lex = Lex()
    for nom, acc in RU_SUBJ:
        for case, form in [("Nom", nom), ("Acc", acc), ("Gen", acc), ("Dat", nom + "у"), ("Ins", nom + "ом"),
                           ("Loc", nom + "е")]:
            lex.add(form, nom, "NOUN", ru_feats(case, "Masc", "Anim"))
    for nom in RU_LOC:
        for case, form in [("Nom", nom), ("Acc", nom), ("Gen", nom + "а"), ("Dat", nom + "у"), ("Ins", nom + "ом"),
                           ("Loc", nom + "е")]:
            lex.add(form, nom, "NOUN", ru_feats(case, "Masc", "Inan"))
    for nom in RU_FEM:
        stem = nom[:-1]
        gen = stem + ("и" if stem[-1] in "кгхжшчщ" else "ы")
        for case, form in [("Nom", nom), ("Acc", stem + "у"), ("Gen", gen), ("Dat", stem + "е"), ("Ins", stem + "ой"),
                           ("Loc", stem + "е")]:
            lex.add(form, nom, "NOUN", ru_feats(case, "Fem", "Inan"))
    for lemma, stem in RU_ADJS:
        lex.add(lemma, lemma, "ADJ", {"Case": "Nom", "Degree": "Pos", "Gender": "Masc", "Number": "Sing"})
        lex.add(stem + "ую", lemma, "ADJ", {"Case": "Acc", "Degree": "Pos", "Gender": "Fem", "Number": "Sing"})
        lex.add(stem + "ая", lemma, "ADJ", {"Case": "Nom", "Degree": "Pos", "Gender": "Fem", "Number": "Sing"})
    for lemma, pres, past in RU_TRANS + RU_INTRANS:
        lex.add(lemma, lemma, "VERB", "Aspect=Imp|VerbForm=Inf|Voice=Act")
        lex.add(pres, lemma, "VERB", RU_PRES)
        lex.add(past, lemma, "VERB", RU_PAST)
    for adv in RU_ADVS:
        lex.add(adv, adv, "ADV", "Degree=Pos")
    for p in RU_PROPN:
        g = "Fem" if p in ("Мария", "Анна") else "Masc"
        lex.add(p, p, "PROPN", ru_feats("Nom", g, "Anim"))

    out = []
    for k in range(N_SENTENCES):
        t = k % 4
        if t == 0:
            # Старый кот спал .
            a = rng.choice(RU_ADJS)
            s = rng.choice(RU_SUBJ)
            v = rng.choice(RU_INTRANS)
            toks = [Tok(cap(a[0]), a[0], "ADJ", {"Case": "Nom", "Degree": "Pos", "Gender": "Masc", "Number": "Sing"}, 2, "amod"),
                    Tok(s[0], s[0], "NOUN", ru_feats("Nom", "Masc", "Anim"), 3, "nsubj"),
                    Tok(v[2], v[0], "VERB", RU_PAST, 0, "root", False), Tok(".", ".", "PUNCT", "_", 3, "punct")]
        elif t == 1:
            # Брат читает новую книгу .
            s = rng.choice(RU_SUBJ)
            v = rng.choice(RU_TRANS)
            a = rng.choice(RU_ADJS)
            o = rng.choice(RU_FEM)
            toks = [Tok(cap(s[0]), s[0], "NOUN", ru_feats("Nom", "Masc", "Anim"), 2, "nsubj"),
                    Tok(v[1], v[0], "VERB", RU_PRES, 0, "root"),
                    Tok(a[1] + "ую", a[0], "ADJ", {"Case": "Acc", "Degree": "Pos", "Gender": "Fem", "Number": "Sing"}, 4, "amod"),
                    Tok(o[:-1] + "у", o, "NOUN", ru_feats("Acc", "Fem", "Inan"), 2, "obj", False),
                    Tok(".", ".", "PUNCT", "_", 2, "punct")]
        elif t == 2:
            # Иван гуляет в парке .
            p = rng.choice(RU_PROPN)
            g = "Fem" if p in ("Мария", "Анна") else "Masc"
            v = rng.choice(RU_INTRANS)
            loc = rng.choice(RU_LOC)
            toks = [Tok(p, p, "PROPN", ru_feats("Nom", g, "Anim"), 2, "nsubj"), Tok(v[1], v[0], "VERB", RU_PRES, 0, "root"),
                    Tok("в", "в", "ADP", "_", 4, "case"),
                    Tok(loc + "е", loc, "NOUN", ru_feats("Loc", "Masc", "Inan"), 2, "obl", False),
                    Tok(".", ".", "PUNCT", "_", 2, "punct")]
        else:
            # Он часто работал .
            v = rng.choice(RU_INTRANS)
            adv = rng.choice(RU_ADVS)
            toks = [Tok("Он", "он", "PRON", "Case=Nom|Gender=Masc|Number=Sing|Person=3", 3, "nsubj"),
                    Tok(adv, adv, "ADV", "Degree=Pos", 3, "advmod"),
                    Tok(v[2], v[0], "VERB", RU_PAST, 0, "root", False), Tok(".", ".", "PUNCT", "_", 3, "punct")]
        out.append(render(f"ru-mini-{k + 1:02d}", toks))
    return out, lex


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r, ensure_ascii=False) + "\n")


def main():
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "crates/core/data/mini"
    out_dir.mkdir(parents=True, exist_ok=True)
    builders = {"en": english, "de": german, "fr": french, "ar": arabic, "ru": russian}
    for seed, (lang, build) in enumerate(builders.items()):
        rng = random.Random(1000 + seed)
        result = build(rng)
        sentences, lex = result[0], result[1]
        (out_dir / f"{lang}.conllu").write_text("".join(sentences), encoding="utf-8")
        lex.write(out_dir / f"{lang}.lexicon.tsv")
        if len(result) > 2:
            write_jsonl(out_dir / f"{lang}.wiktextract.jsonl", result[2])
        print(f"{lang}: {len(sentences)} sentences, {len(lex.rows)} lexicon rows")


if __name__ == "__main__":
    main()
