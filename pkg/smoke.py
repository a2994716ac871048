import sys
sys.path.insert(0, "src")
from annoteng.interpreter import interpret_word, document_ipa
from annoteng.phonology import Dialect

FIG3 = (r"Nob\pln{o}dy's ques\hno{ti}oning that Australo\serl{}pi\no{th}ecu"
        r"\no{s} is a genu\no{s} o\vo{f} h\pln{o}minids that ar\si{e} "
        r"n\uudp{ow}adays \iot{e}xt\st{i}nct.")
EXPECTED = ('[n"oUb6dI-z kw"EstS@nIN D"\\ae{}t ""O:str@loUp"IT@k@s "Iz "eI '
            'dZ"i:n@s "6v h"6mInIdz D"\\ae{}t "Ar n"aU@deIz Ikst"Inkt]')

got = document_ipa(FIG3)
print("FIG3 ok" if got == EXPECTED else "FIG3 MISMATCH")
if got != EXPECTED:
    print("  got:     ", got)
    print("  expected:", EXPECTED)

cases = [
    # (markup, dialect, expected)
    (r"m\nat{e}tre", None, 'm"i:t@r'),
    (r"you'r\si{e}", None, 'j"aUK'),
    (r"y\oopq{ou}'r\si{e}", None, 'j"UK'),
    ("fairy", "GA", 'f"ErI'),
    ("fairy", "RP", 'f"E@rI'),
    ("early", None, None),
    (r"e\si{a}rly", None, '"3:rlI'),
    (r"c\pln{u}\si{p}board", None, None),
    ("dumb", None, None),
    (r"d\pln{u}m\si{b}", None, 'd"2m'),
    (r"c\cnt{o}\no{l}\si{o}nel", None, 'k"3rn@l'),
    ("bridge", None, 'br"IdZ'),
    (r"star\se{}ring", None, 'st"ArIN'),
    ("flower", "GA", 'fl"oU@r'),
    (r"fl\uudp{ow}er", "GA", 'fl"aU@r'),
    (r"fl\uudp{ow}er", "RP", 'fl"aU@'),
    ("flour", "GA", 'fl"aUr'),
    ("flour", "RP", 'fl"aU@'),
    ("tone", "GA", 't"oUn'),
    ("tone", "RP", 't"@Un'),
    ("night", None, 'n"aIt'),
    ("know", None, 'n"oU'),
    ("write", None, 'r"aIt'),
    ("quick", None, 'kw"Ik'),
    ("guess", None, 'g"Es'),
    (r"v\nat{a}gue", None, 'v"eIg'),
    ("oh", None, '"oU'),
    ("John", None, 'dZ"6n'),
    (r"B\nat{o}hr", None, 'b"Or'),
    ("plate", None, 'pl"eIt'),
    ("pshaw", None, 'pS"O:'),
    ("trophy", None, 'tr"6fI'),
    ("psychology", None, None),
    ("rhyme", None, 'r"aIm'),
    ("then", None, 'D"En'),
    ("three", None, 'Tr"i:'),
    ("bigger", None, 'b"Ig@r'),
    ("mess", None, 'm"Es'),
    ("nutty", None, 'n"2tI'),
    ("scent", None, 's"Ent'),
    ("pretty", None, None),
    (r"pr\iot{e}\co{t}y", None, 'pr"IRI'),
    ("fire", "GA", 'f"aIr'),
    ("beer", "GA", 'b"Ir'),
    ("beer", "RP", 'b"I@'),
    ("fur", "GA", 'f"3r'),
    ("fur", "RP", 'f"3:'),
    ("carry", None, 'k"\\ae{}rI'),
    ("err", None, '"3:r'),
    ("card", "GA", 'k"Ard'),
    ("hour", None, None),
    (r"\si{h}our", None, '"aUK'),
    ("house", None, 'h"aUz'),   # needs \no{s}; plain gives z
    (r"hou\no{s}e", None, 'h"aUs'),
    ("tense", None, 't"Ens'),
    ("Thursday", None, 'D"3:rzdeI'),
    ("wisdom", None, 'w"Izd@m'),
    ("lawyer", None, 'l"O:j@r'),
    ("wyvern", None, None),
    ("dwell", None, 'dw"El'),
    ("canyon", None, None),
    (r"can\y{y}on", None, 'k"\\ae{}nj@n'),
    ("Halloween", None, None),
    (r"Hallow\st{e}en", None, None),
    (r"inform\st{a}\sno{ti}on", None, None),
    (r"informa\sno{ti}on", None, '""Inf@rm"eIS@n'),
    (r"locom\nat{o}\sno{ti}on", None, None),
    (r"locomo\sno{ti}on", None, 'l""oUk@m"oUS@n'),
    (r"ergon\pln{\st{o}}mic", None, '""3:rg@n"6mIk'),
    ("the", None, "D@"),
    (r"tot\sch{}em", None, None),
    (r"any\w{}\clr{o}ne", None, None),
    (r"\iot{e}x\st{a}\hvo{gg}er\stst{a}te", None, None),
    (r"fore\serl{}kn\pln{o}\si{w}l\iot{e}dge", None, None),
    (r"youngster", None, 'j"aUNst@r'),
    ("Jewry", None, 'dZ"UKrI'),
    (r"t\si{o}u\co{gh}er", None, 't"2f@r'),
    (r"lefto\serl{}ver", None, None),
    (r"out\sel{}go\sel{}ing", None, None),
    (r"Ire\se{}land", None, '"aIKl@nd'),
    (r"acre", None, '"eIk@r'),
    (r"able", None, '"eIbl'),
    (r"girl", None, 'dZ"3:rl'),
    (r"\co{g}irl", None, 'g"3:rl'),
    (r"isn't", None, '"Izn-t'),
    (r"farm", None, 'f"Arm'),
    (r"it's", None, '"It-s'),
    (r"he's", None, 'h"i:-z'),
    (r"tales", None, 't"eIlz'),
    (r"potatoes", None, None),
    (r"mayhem", None, 'm"eIh@m'),
    (r"rawhide", None, None),
    (r"cure", None, 'kj"UK'),
    (r"cure", "GA", 'kj"Ur'),
    (r"cure", "RP", 'kj"U@'),
    (r"new", "GA", 'n"u'),
    (r"new", "RP", 'nj"u:'),
    (r"rude", None, 'r"u:d'),
    (r"\y{}use", None, None),
    (r"m\brd{u}\si{e}sli", None, None),
    (r"feed", "GA", 'f"id'),
    (r"moon", "GA", 'm"un'),
    (r"pot", "GA", 'p"At'),
    (r"father", "GA", 'f"\\ae{}D@r'),
    (r"f\brd{a}ther", "GA", 'f"AD@r'),
    (r"f\brd{a}st", None, 'f"A:st'),
    (r"fast", "GA", 'f"\\ae{}st'),
    (r"higher", None, 'h"aI@r'),
    (r"weigh", None, 'w"eI'),
    (r"Birming\se{}\si{h}am", None, 'b"3:rmIN@m'),
    (r"Mic\si{h}ael", None, None),
    (r"s\si{c}hmooze", None, 'Sm"u:z'),
    (r"wh\rnd{o}", None, None),
    (r"\si{w}h\rnd{o}", None, 'h"u:'),
    (r"what", None, 'w"\\ae{}t'),
    (r"\co{wh}at", None, '*w"\\ae{}t'),
    (r"eigh\co{th}", None, '"eItT'),
    (r"p\brd{\i}\co{z}\si{z}a", None, 'p"i:ts@'),
    (r"p\co{\group{zz}}"  , None, None),  # bogus, expect error
]

for markup, dia, want in cases:
    d = {"GA": Dialect.GA, "RP": Dialect.RP, None: None}[dia]
    try:
        got = interpret_word(markup, d).text
    except Exception as e:  # noqa: BLE001
        got = f"ERR {type(e).__name__}: {e}"
    flag = ""
    if want is not None:
        flag = "ok" if got == want else f"MISMATCH want {want}"
    print(f"{markup:40s} {dia or '--':2s} -> {got:25s} {flag}")
