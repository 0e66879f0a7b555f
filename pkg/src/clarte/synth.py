"""Synthetic French corpus generator with a planted clarity value per text.

Each document carries a clarity value s in [0, 1] (1 = clearest).  Texture
phenomena (subordination, passives, complex tenses, rare polysyllabic
vocabulary, heavy connectives...) are injected with probabilities that
grow with 1 - s, so indicator values, classifier scores, and readability
grades all move monotonically with the planted value.  Documents come
fully annotated: heads, relations, morphology, constituency trees.

The generator exists because the corpora behind the published experiments
(encyclopedia scrapes, radio transcripts) cannot be redistributed; it
gives the test suite a self-contained substitute with a known ground
truth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .documents import ConstituencyNode, Document, Sentence, Token

# ---------------------------------------------------------------------------
# Vocabulary
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Verb:
    lemma: str
    pres: str
    part: str
    impf: str
    cond: str
    subj: str
    ps: str
    ppres: str


def _er(lemma: str) -> _Verb:
    stem = lemma[:-2]
    return _Verb(lemma, stem + "e", stem + "é", stem + "ait",
                 lemma + "ait", stem + "e", stem + "a", stem + "ant")


TRANSITIVE_SIMPLE = (
    _Verb("manger", "mange", "mangé", "mangeait", "mangerait", "mange", "mangea",
          "mangeant"),
    _Verb("voir", "voit", "vu", "voyait", "verrait", "voie", "vit", "voyant"),
    _er("aimer"), _er("regarder"), _er("chercher"), _er("trouver"), _er("porter"),
)
INFINITIVE_MATRIX = (
    _er("aimer"),
    _Verb("vouloir", "veut", "voulu", "voulait", "voudrait", "veuille", "voulut",
          "voulant"),
)
TRANSITIVE_RARE = (
    _er("conceptualiser"), _er("institutionnaliser"), _er("réglementer"),
    _er("caractériser"), _er("systématiser"), _er("catégoriser"),
)
INTRANSITIVE_SIMPLE = (
    _Verb("dormir", "dort", "dormi", "dormait", "dormirait", "dorme", "dormit",
          "dormant"),
    _er("marcher"), _er("chanter"), _er("jouer"), _er("parler"),
)
INTRANSITIVE_RARE = (
    _er("philosopher"), _er("spéculer"), _er("tergiverser"),
)
MATRIX_VERBS = (_er("penser"), _er("affirmer"), _er("déclarer"))

SIMPLE_NOUNS = (
    ("chat", "Masc"), ("chien", "Masc"), ("ami", "Masc"), ("femme", "Fem"),
    ("fille", "Fem"), ("maison", "Fem"), ("école", "Fem"), ("livre", "Masc"),
    ("jardin", "Masc"), ("ville", "Fem"), ("pain", "Masc"), ("route", "Fem"),
    ("arbre", "Masc"), ("oiseau", "Masc"), ("table", "Fem"), ("porte", "Fem"),
    ("idée", "Fem"), ("chef", "Masc"), ("animal", "Masc"), ("histoire", "Fem"),
)
RARE_NOUNS = (
    ("paradigme", "Masc"), ("jurisprudence", "Fem"), ("phénoménologie", "Fem"),
    ("thermodynamique", "Fem"), ("institutionnalisation", "Fem"),
    ("différenciation", "Fem"), ("conceptualisation", "Fem"),
    ("interdépendance", "Fem"), ("épistémologie", "Fem"),
    ("réglementation", "Fem"), ("paramétrisation", "Fem"),
    ("consubstantialité", "Fem"),
)
SIMPLE_ADJS = ("petit", "grand", "jeune", "bon")  # prenominal
RARE_ADJS = (  # postnominal
    "paradigmatique", "épistémologique", "institutionnel",
    "multidimensionnel", "thermodynamique",
)
SIMPLE_ADVS = ("bien", "vite", "ici", "souvent")
RARE_ADVS = ("conséquemment", "subsidiairement", "corrélativement")

SIMPLE_CONNECTIVES = (("puis",), ("ensuite",), ("alors",), ("enfin",))
COMPLEX_CONNECTIVES = (
    ("néanmoins",), ("toutefois",), ("cependant",),
    ("en", "revanche"), ("par", "conséquent"),
)
FIRST_NAMES = (("Jean", "Masc"), ("Marie", "Fem"), ("Paul", "Masc"), ("Anne", "Fem"))
LAST_NAMES = ("Dupont", "Martin", "Bernard")
ACRONYMS = ("SNCF", "ONU", "TGV", "RATP")
YEARS = ("1984", "1999", "2007", "2015")

_VOWELS = set("aeiouhéèêàâîïôû")

_FIN = {"Mood": "Ind", "Number": "Sing", "Person": "3", "VerbForm": "Fin"}
_TENSE_MORPH = {
    "pres": {**_FIN, "Tense": "Pres"},
    "impf": {**_FIN, "Tense": "Imp"},
    "ps": {**_FIN, "Tense": "Past"},
    "fut": {**_FIN, "Tense": "Fut"},
    "cond": {**_FIN, "Mood": "Cnd", "Tense": "Pres"},
    "subj": {**_FIN, "Mood": "Sub", "Tense": "Pres"},
}
_PART = {"Gender": "Masc", "Number": "Sing", "Tense": "Past", "VerbForm": "Part"}

_AVOIR = {"pres": "a", "impf": "avait", "fut": "aura"}
_ETRE = {"pres": "est", "impf": "était", "ps": "fut", "cond": "serait", "subj": "soit"}

SIMPLE_TENSES = ("pres", "pc")
COMPLEX_TENSES = ("pqp", "cond", "ps", "futant")


def _leaf(label: str, form: str) -> ConstituencyNode:
    return ConstituencyNode(label, (), form)


def _node(label: str, children) -> ConstituencyNode:
    return ConstituencyNode(label, tuple(children), None)


class _Draft:
    """Mutable token rows; heads are indices, fixed up as structure grows."""

    def __init__(self) -> None:
        self.rows: list[dict] = []

    def add(self, form, lemma, upos, morph=None, head=-1, deprel="dep") -> int:
        self.rows.append({
            "form": form, "lemma": lemma, "upos": upos,
            "morph": dict(morph) if morph else {},
            "head": head, "deprel": deprel,
        })
        return len(self.rows) - 1

    def attach(self, i: int, head: int | None, deprel: str) -> None:
        self.rows[i]["head"] = head
        self.rows[i]["deprel"] = deprel

    def form(self, i: int) -> str:
        return self.rows[i]["form"]

    def finish(self, tree, paragraph_id, sent_id) -> Sentence:
        for r in self.rows:
            if r["head"] == -1:
                raise AssertionError(f"unattached token {r['form']!r}")
        tokens = tuple(
            Token(form=r["form"], lemma=r["lemma"], upos=r["upos"],
                  morph=r["morph"], head=r["head"], deprel=r["deprel"])
            for r in self.rows
        )
        return Sentence(tokens=tokens, const_tree=tree,
                        paragraph_id=paragraph_id, sent_id=sent_id)


class _Gen:
    def __init__(self, rng: np.random.Generator, difficulty: float) -> None:
        self.rng = rng
        self.d = float(difficulty)

    def bern(self, p: float) -> bool:
        return bool(self.rng.random() < p)

    def pick(self, seq):
        return seq[int(self.rng.integers(len(seq)))]

    def rare(self) -> bool:
        return self.bern(0.85 * self.d)

    def noun(self):
        return self.pick(RARE_NOUNS if self.rare() else SIMPLE_NOUNS)

    def verb(self, transitive: bool) -> _Verb:
        if transitive:
            return self.pick(TRANSITIVE_RARE if self.rare() else TRANSITIVE_SIMPLE)
        return self.pick(INTRANSITIVE_RARE if self.rare() else INTRANSITIVE_SIMPLE)

    def tense(self) -> str:
        if self.bern(0.7 * self.d):
            return self.pick(COMPLEX_TENSES)
        return "pc" if self.bern(0.2) else "pres"

    # -- noun phrase ------------------------------------------------------

    def np(self, b: _Draft, *, complex_np=False, appos=False, rel_depth=0,
           proper=False, indef=False):
        """Emit an NP; returns (head index, tree node).  The caller attaches
        the head token."""
        if proper:
            first, _g = self.pick(FIRST_NAMES)
            i_first = b.add(first, first, "PROPN", {"Number": "Sing"})
            kids = [_leaf("NPP", first)]
            if self.bern(0.7):
                last = self.pick(LAST_NAMES)
                i_last = b.add(last, last, "PROPN", {"Number": "Sing"})
                b.attach(i_last, i_first, "flat:name")
                kids.append(_leaf("NPP", last))
            return i_first, _node("NP", kids)

        form, gender = self.noun()
        if indef:
            det = "une" if gender == "Fem" else "un"
            det_morph = {"Definite": "Ind", "Gender": gender, "Number": "Sing",
                         "PronType": "Art"}
        else:
            det = "l'" if form[0] in _VOWELS else ("la" if gender == "Fem" else "le")
            det_morph = {"Definite": "Def", "Gender": gender, "Number": "Sing",
                         "PronType": "Art"}
        kids = []
        i_det = b.add(det, "un" if indef else "le", "DET", det_morph)
        kids.append(_leaf("DET", det))
        if complex_np and self.bern(0.5):
            adj = self.pick(SIMPLE_ADJS)
            i_adj = b.add(adj, adj, "ADJ", {"Gender": gender, "Number": "Sing"})
            kids.append(_leaf("ADJ", adj))
        else:
            i_adj = None
        i_noun = b.add(form, form, "NOUN", {"Gender": gender, "Number": "Sing"})
        kids.append(_leaf("NC", form))
        b.attach(i_det, i_noun, "det")
        if i_adj is not None:
            b.attach(i_adj, i_noun, "amod")
        if complex_np:
            if self.bern(0.6):
                adj = self.pick(RARE_ADJS)
                i_post = b.add(adj, adj, "ADJ", {"Gender": "Masc", "Number": "Sing"})
                b.attach(i_post, i_noun, "amod")
                kids.append(_leaf("ADJ", adj))
            n2, g2 = self.noun()
            pp_kids = []
            if g2 == "Fem":
                i_p = b.add("de", "de", "ADP")
                pp_kids.append(_leaf("P", "de"))
                i_d2 = b.add("la" if n2[0] not in _VOWELS else "l'", "le", "DET",
                             {"Definite": "Def", "Gender": g2, "Number": "Sing",
                              "PronType": "Art"})
                np2_kids = [_leaf("DET", b.form(i_d2))]
            elif n2[0] in _VOWELS:
                i_p = b.add("de", "de", "ADP")
                pp_kids.append(_leaf("P", "de"))
                i_d2 = b.add("l'", "le", "DET",
                             {"Definite": "Def", "Gender": g2, "Number": "Sing",
                              "PronType": "Art"})
                np2_kids = [_leaf("DET", "l'")]
            else:
                i_p = b.add("du", "de", "ADP")
                pp_kids.append(_leaf("P", "du"))
                i_d2 = None
                np2_kids = []
            i_n2 = b.add(n2, n2, "NOUN", {"Gender": g2, "Number": "Sing"})
            np2_kids.append(_leaf("NC", n2))
            b.attach(i_p, i_n2, "case")
            if i_d2 is not None:
                b.attach(i_d2, i_n2, "det")
            b.attach(i_n2, i_noun, "nmod")
            pp_kids.append(_node("NP", np2_kids))
            kids.append(_node("PP", pp_kids))
        if appos:
            i_c1 = b.add(",", ",", "PUNCT")
            kids.append(_leaf("PONCT", ","))
            i_ap, ap_node = self.np(b, indef=True)
            b.attach(i_ap, i_noun, "appos")
            kids.append(ap_node)
            i_c2 = b.add(",", ",", "PUNCT")
            kids.append(_leaf("PONCT", ","))
            b.attach(i_c1, i_ap, "punct")
            b.attach(i_c2, i_ap, "punct")
        if rel_depth > 0:
            kids.append(self._relative(b, i_noun, rel_depth))
        return i_noun, _node("NP", kids)

    def _relative(self, b: _Draft, i_noun: int, depth: int) -> ConstituencyNode:
        kids = []
        verb = self.verb(transitive=True)
        tense = "impf" if self.bern(0.5 * self.d) else "pres"
        if self.bern(0.5):
            # subject relative: "qui mange le pain"
            i_rel = b.add("qui", "qui", "PRON", {"PronType": "Rel"})
            kids.append(_leaf("PROREL", "qui"))
            i_v, v_kids, _ = self.vn(b, verb, tense)
            kids.extend(v_kids)
            b.attach(i_rel, i_v, "nsubj")
            i_obj, obj_node = self.np(b, rel_depth=depth - 1 if self.bern(0.55 * self.d) else 0)
            b.attach(i_obj, i_v, "obj")
            kids.append(obj_node)
        else:
            # object relative: "que le chef mange"
            i_rel = b.add("que", "que", "PRON", {"PronType": "Rel"})
            kids.append(_leaf("PROREL", "que"))
            i_s, s_node = self.np(b)
            kids.append(s_node)
            i_v, v_kids, _ = self.vn(b, verb, tense)
            kids.extend(v_kids)
            b.attach(i_rel, i_v, "obj")
            b.attach(i_s, i_v, "nsubj")
        b.attach(i_v, i_noun, "acl:relcl")
        return _node("Srel", kids)

    # -- verb nucleus -----------------------------------------------------

    def vn(self, b: _Draft, verb: _Verb, tense: str, *, neg=False, passive=False):
        """Emit the verbal nucleus; returns (main index, leaves, finite Tense)."""
        kids = []
        i_ne = None
        if passive:
            aux_tense = tense if tense in ("pres", "impf") else (
                "impf" if tense in ("pqp", "futant") else "pres")
            compound = tense in ("pqp", "futant")
            first_form = _AVOIR["impf" if tense == "pqp" else "fut"] if compound \
                else _ETRE[aux_tense]
            if neg:
                ne = "n'" if first_form[0] in _VOWELS else "ne"
                i_ne = b.add(ne, "ne", "ADV", {"Polarity": "Neg"})
                kids.append(_leaf("ADV", ne))
            if compound:
                aux_t = "impf" if tense == "pqp" else "fut"
                i_a1 = b.add(_AVOIR[aux_t], "avoir", "AUX", _TENSE_MORPH[aux_t])
                kids.append(_leaf("V", b.form(i_a1)))
                if neg:
                    i_pas = b.add("pas", "pas", "ADV", {"Polarity": "Neg"})
                    kids.append(_leaf("ADV", "pas"))
                else:
                    i_pas = None
                i_a2 = b.add("été", "être", "AUX", _PART)
                kids.append(_leaf("V", "été"))
                i_main = b.add(verb.part, verb.lemma, "VERB", _PART)
                kids.append(_leaf("V", verb.part))
                b.attach(i_a1, i_main, "aux")
                b.attach(i_a2, i_main, "aux:pass")
                fin = _TENSE_MORPH[aux_t]["Tense"]
            else:
                i_a1 = b.add(_ETRE[aux_tense], "être", "AUX", _TENSE_MORPH[aux_tense])
                kids.append(_leaf("V", b.form(i_a1)))
                if neg:
                    i_pas = b.add("pas", "pas", "ADV", {"Polarity": "Neg"})
                    kids.append(_leaf("ADV", "pas"))
                else:
                    i_pas = None
                i_main = b.add(verb.part, verb.lemma, "VERB", _PART)
                kids.append(_leaf("V", verb.part))
                b.attach(i_a1, i_main, "aux:pass")
                fin = _TENSE_MORPH[aux_tense]["Tense"]
        elif tense in ("pc", "pqp", "futant"):
            aux_t = {"pc": "pres", "pqp": "impf", "futant": "fut"}[tense]
            aux_form = _AVOIR[aux_t]
            if neg:
                ne = "n'" if aux_form[0] in _VOWELS else "ne"
                i_ne = b.add(ne, "ne", "ADV", {"Polarity": "Neg"})
                kids.append(_leaf("ADV", ne))
            i_a1 = b.add(aux_form, "avoir", "AUX", _TENSE_MORPH[aux_t])
            kids.append(_leaf("V", aux_form))
            if neg:
                i_pas = b.add("pas", "pas", "ADV", {"Polarity": "Neg"})
                kids.append(_leaf("ADV", "pas"))
            else:
                i_pas = None
            i_main = b.add(verb.part, verb.lemma, "VERB", _PART)
            kids.append(_leaf("V", verb.part))
            b.attach(i_a1, i_main, "aux")
            fin = _TENSE_MORPH[aux_t]["Tense"]
        else:
            form = getattr(verb, tense)
            if neg:
                ne = "n'" if form[0] in _VOWELS else "ne"
                i_ne = b.add(ne, "ne", "ADV", {"Polarity": "Neg"})
                kids.append(_leaf("ADV", ne))
            i_main = b.add(form, verb.lemma, "VERB", _TENSE_MORPH[tense])
            kids.append(_leaf("V", form))
            if neg:
                i_pas = b.add("pas", "pas", "ADV", {"Polarity": "Neg"})
                kids.append(_leaf("ADV", "pas"))
            else:
                i_pas = None
            fin = _TENSE_MORPH[tense]["Tense"]
        if i_ne is not None:
            b.attach(i_ne, i_main, "advmod")
        if neg and i_pas is not None:
            b.attach(i_pas, i_main, "advmod")
        return i_main, kids, fin

    # -- sentence ---------------------------------------------------------

    def sentence(self, paragraph_id: int, sent_id: str, tense: str) -> tuple[Sentence, str]:
        b = _Draft()
        kids: list[ConstituencyNode] = []
        d = self.d

        structure = "plain"
        if self.bern(0.2 * d):
            structure = "cleft"
        elif self.bern(0.3 * d):
            structure = "ccomp"
        elif self.bern(0.15 * d):
            structure = "inversion"

        # sentence-initial connective
        pending_connective: list[int] = []
        p_conn = 0.3 if d < 0.5 else 0.3 + 0.3 * d
        if structure == "plain" and self.bern(p_conn):
            words = self.pick(COMPLEX_CONNECTIVES if self.bern(d) else SIMPLE_CONNECTIVES)
            i_first = b.add(words[0], words[0], "ADV")
            kids.append(_leaf("ADV", words[0]))
            pending_connective.append(i_first)
            for w in words[1:]:
                i_w = b.add(w, w, "ADV")
                b.attach(i_w, i_first, "fixed")
                kids.append(_leaf("ADV", w))
            i_c = b.add(",", ",", "PUNCT")
            pending_connective.append(i_c)
            kids.append(_leaf("PONCT", ","))

        if structure == "cleft":
            root, tense_str = self._cleft(b, kids)
        elif structure == "ccomp":
            root, tense_str = self._ccomp(b, kids, tense)
        elif structure == "inversion":
            root, tense_str = self._inversion(b, kids, tense)
        else:
            root, tense_str = self._plain(b, kids, tense)

        for i in pending_connective:
            b.attach(i, root, "advmod" if b.rows[i]["upos"] == "ADV" else "punct")

        i_dot = b.add(".", ".", "PUNCT")
        b.attach(i_dot, root, "punct")
        kids.append(_leaf("PONCT", "."))
        b.rows[root]["head"] = None
        b.rows[root]["deprel"] = "root"
        return b.finish(_node("SENT", kids), paragraph_id, sent_id), tense_str

    def _plain(self, b: _Draft, kids, tense: str):
        d = self.d
        fronted = self.bern(0.5 * d)
        trailing = not fronted and self.bern(0.3 * d)
        passive = self.bern(0.45 * d)
        neg = self.bern(0.4 * d)
        transitive = passive or not self.bern(0.35)
        xcomp = transitive and not passive and self.bern(0.05 + 0.25 * d)
        verb = self.pick(INFINITIVE_MATRIX) if xcomp else self.verb(transitive)

        advcl_kids: list[ConstituencyNode] = []
        i_advcl = None
        if fronted:
            i_bien = b.add("bien", "bien", "SCONJ")
            advcl_kids.append(_leaf("CS", "bien"))
            i_que = b.add("que", "que", "SCONJ")
            b.attach(i_que, i_bien, "fixed")
            advcl_kids.append(_leaf("CS", "que"))
            i_ss, ss_node = self.np(b)
            advcl_kids.append(ss_node)
            sverb = self.verb(transitive=False)
            i_sv, sv_kids, _ = self.vn(b, sverb, "subj")
            advcl_kids.extend(sv_kids)
            b.attach(i_ss, i_sv, "nsubj")
            b.attach(i_bien, i_sv, "mark")
            i_advcl = i_sv
            kids.append(_node("Ssub", advcl_kids))
            i_cm = b.add(",", ",", "PUNCT")
            kids.append(_leaf("PONCT", ","))

        # fronted present-participle adjunct: "Mangeant le pain, ..."
        if self.bern(0.25 * d):
            pverb = self.verb(transitive=True)
            i_pv = b.add(pverb.ppres, pverb.lemma, "VERB",
                         {"Tense": "Pres", "VerbForm": "Part"})
            p_kids = [_leaf("V", pverb.ppres)]
            i_po, po_node = self.np(b)
            b.attach(i_po, i_pv, "obj")
            p_kids.append(po_node)
            kids.append(_node("VPpart", p_kids))
            i_pc = b.add(",", ",", "PUNCT")
            kids.append(_leaf("PONCT", ","))
        else:
            i_pv = None

        i_subj, subj_node = self.np(
            b,
            complex_np=self.bern(0.5 * d),
            appos=self.bern(0.3 * d),
            proper=self.bern(0.15),
        )
        kids.append(subj_node)

        # parenthesized acronym after the subject
        if self.bern(0.2 * d):
            i_o = b.add("(", "(", "PUNCT")
            kids.append(_leaf("PONCT", "("))
            acro = self.pick(ACRONYMS)
            i_a = b.add(acro, acro, "PROPN")
            b.attach(i_a, i_subj, "nmod")
            kids.append(_leaf("NPP", acro))
            i_cl = b.add(")", ")", "PUNCT")
            kids.append(_leaf("PONCT", ")"))
            b.attach(i_o, i_a, "punct")
            b.attach(i_cl, i_a, "punct")

        # dash-delimited interpolation
        incise_after_vn = self.bern(0.2 * d)

        i_v, v_kids, tense_str = self.vn(b, verb, tense, neg=neg, passive=passive)
        kids.append(_node("VN", v_kids))
        if passive:
            b.attach(i_subj, i_v, "nsubj:pass")
        else:
            b.attach(i_subj, i_v, "nsubj")
        if i_advcl is not None:
            b.attach(i_advcl, i_v, "advcl")
            b.attach(i_cm, i_v, "punct")
        if i_pv is not None:
            b.attach(i_pv, i_v, "advcl")
            b.attach(i_pc, i_v, "punct")

        if incise_after_vn:
            i_d1 = b.add("—", "—", "PUNCT")
            kids.append(_leaf("PONCT", "—"))
            i_pr = b.add("il", "il", "PRON",
                         {"Gender": "Masc", "Number": "Sing", "Person": "3",
                          "PronType": "Prs"})
            kids.append(_leaf("CLS", "il"))
            iverb = self.pick(INTRANSITIVE_SIMPLE)
            i_iv, iv_kids, _ = self.vn(b, iverb, "pres")
            kids.extend(iv_kids)
            b.attach(i_pr, i_iv, "nsubj")
            b.attach(i_iv, i_v, "parataxis")
            i_d2 = b.add("—", "—", "PUNCT")
            kids.append(_leaf("PONCT", "—"))
            b.attach(i_d1, i_iv, "punct")
            b.attach(i_d2, i_iv, "punct")

        if passive:
            i_par = b.add("par", "par", "ADP")
            kids.append(_leaf("P", "par"))
            i_ag, ag_node = self.np(b)
            kids.append(ag_node)
            b.attach(i_par, i_ag, "case")
            b.attach(i_ag, i_v, "obl:agent")
        elif xcomp:
            infv = self.verb(transitive=True)
            i_inf = b.add(infv.lemma, infv.lemma, "VERB", {"VerbForm": "Inf"})
            inf_kids = [_leaf("V", infv.lemma)]
            b.attach(i_inf, i_v, "xcomp")
            i_io, io_node = self.np(b)
            b.attach(i_io, i_inf, "obj")
            inf_kids.append(io_node)
            kids.append(_node("VPinf", inf_kids))
        elif transitive:
            if self.bern(0.3 * d):
                self._enumeration(b, kids, i_v)
            else:
                rel = 0
                if self.bern(0.75 * d):
                    rel = 2 if self.bern(0.45 * d) else 1
                i_obj, obj_node = self.np(b, rel_depth=rel,
                                          complex_np=self.bern(0.3 * d))
                b.attach(i_obj, i_v, "obj")
                kids.append(obj_node)
        else:
            if self.bern(0.5):
                adv = self.pick(RARE_ADVS if self.rare() else SIMPLE_ADVS)
                i_adv = b.add(adv, adv, "ADV")
                b.attach(i_adv, i_v, "advmod")
                kids.append(_leaf("ADV", adv))

        # "en 1984" style oblique
        if self.bern(0.12):
            i_en = b.add("en", "en", "ADP")
            kids.append(_leaf("P", "en"))
            year = self.pick(YEARS)
            i_y = b.add(year, year, "NUM", {"NumType": "Card"})
            kids.append(_leaf("NC", year))
            b.attach(i_en, i_y, "case")
            b.attach(i_y, i_v, "obl")

        # clause coordination: "..., et le chien dort"
        if not passive and self.bern(0.08 + 0.3 * d):
            i_et = b.add("et", "et", "CCONJ")
            kids.append(_leaf("COORD", "et"))
            i_s2, s2_node = self.np(b)
            kids.append(s2_node)
            vb2 = self.verb(transitive=False)
            i_v2, v2_kids, _ = self.vn(b, vb2, tense if tense in ("pres", "impf") else "pres")
            kids.append(_node("VN", v2_kids))
            b.attach(i_s2, i_v2, "nsubj")
            b.attach(i_et, i_v2, "cc")
            b.attach(i_v2, i_v, "conj")

        if trailing:
            sub_kids = []
            i_parce = b.add("parce", "parce", "SCONJ")
            sub_kids.append(_leaf("CS", "parce"))
            i_que = b.add("que", "que", "SCONJ")
            b.attach(i_que, i_parce, "fixed")
            sub_kids.append(_leaf("CS", "que"))
            i_ss, ss_node = self.np(b)
            sub_kids.append(ss_node)
            sverb = self.verb(transitive=False)
            i_sv, sv_kids, _ = self.vn(b, sverb, "impf" if self.bern(0.5) else "pres")
            sub_kids.extend(sv_kids)
            b.attach(i_ss, i_sv, "nsubj")
            b.attach(i_parce, i_sv, "mark")
            b.attach(i_sv, i_v, "advcl")
            kids.append(_node("Ssub", sub_kids))

        return i_v, tense_str

    def _enumeration(self, b: _Draft, kids, i_v: int) -> None:
        items = []
        for j in range(4):
            if j:
                if j < 3:
                    i_c = b.add(",", ",", "PUNCT")
                    kids.append(_leaf("PONCT", ","))
                else:
                    i_c = b.add("et", "et", "CCONJ")
                    kids.append(_leaf("COORD", "et"))
            i_n, n_node = self.np(b)
            kids.append(n_node)
            if j == 0:
                b.attach(i_n, i_v, "obj")
            else:
                b.attach(i_n, items[0], "conj")
                b.attach(i_c, i_n, "punct" if j < 3 else "cc")
            items.append(i_n)
        if self.bern(0.3):
            i_etc = b.add("etc.", "etc.", "X")
            b.attach(i_etc, items[0], "dep")
            kids.append(_leaf("X", "etc."))

    def _cleft(self, b: _Draft, kids):
        i_ce = b.add("c'", "ce", "PRON", {"PronType": "Dem"})
        kids.append(_leaf("CLS", "c'"))
        i_est = b.add("est", "être", "AUX", _TENSE_MORPH["pres"])
        kids.append(_leaf("V", "est"))
        i_n, n_node = self.np(b)
        kids.append(n_node)
        b.attach(i_ce, i_n, "expl")
        b.attach(i_est, i_n, "cop")
        rel_kids = []
        i_qui = b.add("qui", "qui", "PRON", {"PronType": "Rel"})
        rel_kids.append(_leaf("PROREL", "qui"))
        verb = self.verb(transitive=True)
        i_v, v_kids, tense_str = self.vn(b, verb, "pres")
        rel_kids.extend(v_kids)
        b.attach(i_qui, i_v, "nsubj")
        b.attach(i_v, i_n, "acl:relcl")
        i_obj, obj_node = self.np(b)
        b.attach(i_obj, i_v, "obj")
        rel_kids.append(obj_node)
        kids.append(_node("Srel", rel_kids))
        return i_n, tense_str

    def _ccomp(self, b: _Draft, kids, tense: str):
        i_subj, subj_node = self.np(b, proper=self.bern(0.3))
        kids.append(subj_node)
        verb = self.pick(MATRIX_VERBS)
        main_tense = tense if tense in ("pres", "impf", "pc") else "pres"
        i_v, v_kids, tense_str = self.vn(b, verb, main_tense)
        kids.append(_node("VN", v_kids))
        b.attach(i_subj, i_v, "nsubj")
        sub_kids = []
        i_que = b.add("que", "que", "SCONJ")
        sub_kids.append(_leaf("CS", "que"))
        i_ss, ss_node = self.np(b)
        sub_kids.append(ss_node)
        sverb = self.verb(transitive=True)
        sub_tense = tense if tense != "subj" else "pres"
        i_sv, sv_kids, _ = self.vn(b, sverb, sub_tense)
        sub_kids.extend(sv_kids)
        i_so, so_node = self.np(b)
        b.attach(i_so, i_sv, "obj")
        sub_kids.append(so_node)
        b.attach(i_que, i_sv, "mark")
        b.attach(i_ss, i_sv, "nsubj")
        b.attach(i_sv, i_v, "ccomp")
        kids.append(_node("Ssub", sub_kids))
        return i_v, tense_str

    def _inversion(self, b: _Draft, kids, tense: str):
        adv = self.pick(("ainsi", "alors"))
        i_adv = b.add(adv, adv, "ADV")
        kids.append(_leaf("ADV", adv))
        verb = self.verb(transitive=False)
        use = tense if tense in ("pres", "impf", "ps") else "pres"
        i_v, v_kids, tense_str = self.vn(b, verb, use)
        kids.append(_node("VN", v_kids))
        b.attach(i_adv, i_v, "advmod")
        i_subj, subj_node = self.np(b)
        b.attach(i_subj, i_v, "nsubj")
        kids.append(subj_node)
        return i_v, tense_str


@dataclass(frozen=True)
class SyntheticCorpus:
    documents: tuple[Document, ...]
    clarity: dict[str, float]  # doc id -> planted clarity in [0, 1]


def _make_document(rng: np.random.Generator, doc_id: str, clarity: float,
                   label: str | None) -> Document:
    g = _Gen(rng, 1.0 - clarity)
    n_sentences = 6 + int(round(4 * clarity)) + int(rng.integers(0, 3))
    n_paragraphs = 2 if n_sentences < 9 else 3
    bounds = sorted(
        {int(x) for x in np.linspace(0, n_sentences, n_paragraphs + 1).round()}
    )
    sentences: list[Sentence] = []
    k = 0
    for p in range(len(bounds) - 1):
        # one steady tense per paragraph in clear texts, shifting tenses in
        # difficult ones
        par_tense = "pc" if g.bern(0.2) else "pres"
        for _ in range(bounds[p + 1] - bounds[p]):
            tense = g.tense() if g.bern(0.8 * g.d) else par_tense
            sent, _fin = g.sentence(p, f"s{k}", tense)
            sentences.append(sent)
            k += 1
    return Document(id=doc_id, sentences=tuple(sentences), source_label=label)


def generate_corpus(n_simple: int = 500, n_complex: int = 500,
                    seed: int = 0) -> SyntheticCorpus:
    """Labeled corpus: simple texts get clarity in [0.6, 1.0], complex texts
    in [0.0, 0.4]."""
    if n_simple < 1 or n_complex < 1:
        raise ValueError("both class sizes must be at least 1")
    rng = np.random.default_rng(seed)
    docs: list[Document] = []
    clarity: dict[str, float] = {}
    for i in range(n_simple):
        s = float(rng.uniform(0.6, 1.0))
        doc_id = f"synth-simple-{i:04d}"
        docs.append(_make_document(rng, doc_id, s, "simple"))
        clarity[doc_id] = s
    for i in range(n_complex):
        s = float(rng.uniform(0.0, 0.4))
        doc_id = f"synth-complex-{i:04d}"
        docs.append(_make_document(rng, doc_id, s, "complex"))
        clarity[doc_id] = s
    return SyntheticCorpus(tuple(docs), clarity)


def generate_continuum(n: int = 200, seed: int = 0) -> SyntheticCorpus:
    """Unlabeled texts spanning the whole clarity range, for rank-correlation
    checks against the planted values."""
    if n < 1:
        raise ValueError("corpus size must be at least 1")
    rng = np.random.default_rng(seed)
    docs: list[Document] = []
    clarity: dict[str, float] = {}
    for i in range(n):
        s = float(rng.uniform(0.0, 1.0))
        doc_id = f"synth-eval-{i:04d}"
        docs.append(_make_document(rng, doc_id, s, None))
        clarity[doc_id] = s
    return SyntheticCorpus(tuple(docs), clarity)
