import pytest
from hypothesis import given
from hypothesis import strategies as st

from evidential.errors import ParseError, SignatureError
from evidential.formula import BOTTOM, And, Atom, Implies, Not, Or, normal_key, substitute
from evidential.language import (
    Default,
    ProbabilityInterval,
    Signature,
    StatisticalStatement,
    UniversalRule,
    ground_rules,
)
from evidential.parser import (
    format_program,
    parse_formula,
    parse_item,
    parse_program,
    parse_universe,
    tokenize,
)
from evidential.solver import enumerate_entails

from .conftest import PROPS, formulas

PROP_SIG = Signature((), tuple((a.pred, 0) for a in PROPS))

TWEETY = """
# the usual bird
const tweety.
rule all x: penguin(x) -> bird(x).
rule all x: penguin(x) -> ~flies(x).
stat x: flies(x) | bird(x) in [0.95, 1].
fact bird(tweety).
default bird(tweety) : M flies(tweety) / flies(tweety).
"""


def equivalent(a, b):
    return enumerate_entails([a], b) and enumerate_entails([b], a)


class TestFormulaPrinting:
    def test_precedence_and_parentheses(self):
        p, q, r = (Atom(n, ()) for n in "pqr")
        assert str(And((Or((p, q)), r))) == "(p v q) & r"
        assert str(Or((And((p, q)), r))) == "p & q v r"
        assert str(Not(And((p, q)))) == "~(p & q)"
        assert str(Implies(Implies(p, q), r)) == "(p -> q) -> r"
        assert str(Implies(p, Implies(q, r))) == "p -> q -> r"

    def test_atoms_with_arguments(self):
        assert str(Atom("loves", ("a", "b"))) == "loves(a,b)"

    @given(formulas())
    def test_print_parse_round_trip(self, f):
        g = parse_formula(str(f), PROP_SIG)
        assert str(g) == str(f)
        assert equivalent(f, g)

    @given(formulas())
    def test_double_negation_is_invisible_to_normal_key(self, f):
        assert normal_key(Not(Not(f))) == normal_key(f)

    def test_normal_key_is_order_insensitive_but_nothing_more(self):
        p, q = Atom("p", ()), Atom("q", ())
        assert normal_key(And((p, q))) == normal_key(And((q, p)))
        assert normal_key(And((p, And((q, p))))) == normal_key(And((q, p)))
        # De Morgan is deliberately not applied.
        assert normal_key(Not(And((p, q)))) != normal_key(Or((Not(p), Not(q))))

    def test_substitute_only_touches_the_variable(self):
        f = And((Atom("r", ("x", "a")), Not(Atom("s", ("x",)))))
        assert substitute(f, "x", "b") == And((Atom("r", ("b", "a")), Not(Atom("s", ("b",)))))


class TestParser:
    def test_program_sections(self):
        prog = parse_program(TWEETY)
        assert prog.signature.constants == ("tweety",)
        assert dict(prog.signature.predicates) == {"penguin": 1, "bird": 1, "flies": 1}
        assert prog.facts == (Atom("bird", ("tweety",)),)
        assert len(prog.rules) == 2 and len(prog.stats) == 1 and len(prog.defaults) == 1
        stat = prog.stats[0]
        assert stat.interval == ProbabilityInterval(0.95, 1.0)
        assert stat.target_for("tweety") == Atom("flies", ("tweety",))

    def test_grounding_is_rule_major(self):
        prog = parse_program("const a, b. rule all x: p(x) -> q(x). rule all y: q(y) -> r(y).")
        assert [str(g) for g in prog.ground_rules] == [
            "p(a) -> q(a)", "p(b) -> q(b)", "q(a) -> r(a)", "q(b) -> r(b)"]

    def test_format_round_trip(self):
        prog = parse_program(TWEETY)
        text = format_program(prog.signature, prog.facts, prog.rules, prog.stats, prog.defaults)
        again = parse_program(text)
        assert again == prog

    def test_implication_and_falsum_in_facts(self):
        prog = parse_program("const a. fact p(a) -> q(a) v r(a). fact ~false.")
        assert prog.facts == (
            Implies(Atom("p", ("a",)), Or((Atom("q", ("a",)), Atom("r", ("a",))))),
            Not(BOTTOM),
        )

    @pytest.mark.parametrize("text, line, col", [
        ("const a.\nfact p(a", 2, 9),
        ("const a.\nfact p(b).", 2, 8),
        ("fact p & .", 1, 10),
        ("const a. stat x: p(x) | q(x) in [0.9, 0.2].", 1, 33),
        ("const a. rule all x: p(a) -> q(x).", 1, 22),
    ])
    def test_errors_carry_positions(self, text, line, col):
        with pytest.raises(ParseError) as info:
            parse_program(text)
        assert (info.value.line, info.value.column) == (line, col)

    def test_signature_errors(self):
        with pytest.raises(SignatureError):
            parse_program("const a. fact p(a). fact p(a, a).")
        with pytest.raises(SignatureError):
            parse_program("pred p/1. const a. fact q(a).")
        with pytest.raises(SignatureError):
            parse_program("const a, a.")

    def test_reserved_words(self):
        with pytest.raises(ParseError):
            parse_program("const v.")
        with pytest.raises(ParseError):
            parse_program("const a. fact in(a).")

    def test_unexpected_character(self):
        with pytest.raises(ParseError) as info:
            tokenize("fact p(a) $")
        assert info.value.column == 11

    def test_parse_item_kinds(self):
        sig = parse_program(TWEETY).signature
        assert isinstance(parse_item("fact penguin(tweety).", sig), Atom)
        assert isinstance(parse_item("rule all y: bird(y) -> flies(y).", sig), UniversalRule)
        assert isinstance(parse_item("stat y: flies(y) | bird(y) in [0.5, 0.6].", sig),
                          StatisticalStatement)
        assert isinstance(parse_item("default : M flies(tweety) / flies(tweety).", sig), Default)
        with pytest.raises(ParseError):
            parse_item("const b.", sig)
        with pytest.raises(SignatureError):
            parse_item("fact swims(tweety).", sig)

    def test_universe_file(self):
        sig = parse_program(TWEETY).signature
        text = "flies(tweety)\n\n# comment\n~flies(tweety)  # trailing\nflies(tweety)\n"
        assert parse_universe(text, sig) == (Atom("flies", ("tweety",)),
                                             Not(Atom("flies", ("tweety",))))
        with pytest.raises(ParseError) as info:
            parse_universe("flies(tweety)\nflies(\n", sig)
        assert info.value.line == 2


class TestDeclarations:
    def test_interval_validation(self):
        with pytest.raises(ValueError):
            ProbabilityInterval(0.6, 0.5)
        with pytest.raises(ValueError):
            ProbabilityInterval(-0.1, 0.5)
        assert ProbabilityInterval(0.0, 1.0).contains(ProbabilityInterval(0.2, 0.3))
        assert not ProbabilityInterval(0.2, 0.3).contains(ProbabilityInterval(0.0, 1.0))

    @given(st.floats(0, 1), st.floats(0, 1))
    def test_complement_is_an_involution(self, a, b):
        iv = ProbabilityInterval(min(a, b), max(a, b))
        back = iv.complement().complement()
        assert back.lower == pytest.approx(iv.lower) and back.upper == pytest.approx(iv.upper)

    def test_default_needs_a_justification(self):
        with pytest.raises(ValueError):
            Default(None, (), Atom("p", ()))

    def test_ground_rules_helper(self):
        r = UniversalRule("x", Atom("p", ("x",)), Atom("q", ("x",)))
        assert ground_rules([r], ["a"]) == [Implies(Atom("p", ("a",)), Atom("q", ("a",)))]

    def test_signature_check(self):
        sig = Signature(("a",), (("p", 1),))
        sig.check(Atom("p", ("a",)))
        sig.check(Atom("p", ("x",)), variable="x")
        for bad in (Atom("p", ("b",)), Atom("q", ("a",)), Atom("p", ("a", "a"))):
            with pytest.raises(ValueError):
                sig.check(bad)
