"""
Parser for ``.rs-spec`` specifications, assertions, formulas and process terms.

The grammar is run by lark's LALR parser; a builder then walks the tree,
resolves names in declaration order and checks entities against the declared
universe. Semantic problems are collected so that a document reports all of
them at once; the first one is raised with the full list in ``diagnostics``.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import (
    AbstractSet,
    Any,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Tuple,
    Union,
)

from lark import Lark, Token, Tree
from lark.exceptions import (
    UnexpectedCharacters,
    UnexpectedEOF,
    UnexpectedInput,
    UnexpectedToken,
)

from rsos.assertions import And as AAnd
from rsos.assertions import Assertion, NonEmpty
from rsos.assertions import Not as ANot
from rsos.assertions import Or as AOr
from rsos.assertions import Position, SubsetOf, Xor
from rsos.core import (
    NIL,
    ContextExpr,
    EntitySet,
    Prefix,
    Process,
    Reaction,
    Rec,
    Var,
    check_guarded,
    choice,
    format_set,
    normalize,
)
from rsos.equiv import FF, TT, BioHML, Box, Diamond
from rsos.equiv import And as FAnd
from rsos.equiv import Or as FOr
from rsos.exceptions import (
    DuplicateNameError,
    ReactionInvariantError,
    SourcePos,
    SpecError,
    SpecSyntaxError,
    UnguardedRecursionError,
    UnknownEntityError,
    UnknownNameError,
    UnknownPositionError,
)
from rsos.extensions import ConnectedSystem
from rsos.quantities import EntityMultiset, LinExpr, QuantContext

GRAMMAR = r"""
start: (_decl ";")*

_decl: entities_decl
     | variables_decl
     | reaction_decl
     | context_decl
     | system_decl
     | assert_decl
     | formula_decl
     | link_decl

entities_decl: "entities" NAME ("," NAME)*
variables_decl: "variables" NAME ("," NAME)*
reaction_decl: "reaction" NAME ":" eset "-|" eset "->" eset
context_decl: "context" NAME "=" ctx
system_decl: "system" NAME "=" system
assert_decl: "assert" NAME "=" asrt
formula_decl: "formula" NAME "=" fml
link_decl: "link" NAME "=" NAME cset NAME

eset: "[" (eitem ("," eitem)*)? "]"
eitem: NAME                 -> eitem_one
     | INT "*" NAME         -> eitem_many

cset: "{" (citem ("," citem)*)? "}"
citem: NAME                 -> citem_one
     | amount "*" NAME      -> citem_amount
?amount: INT                -> lin_int
       | NAME               -> lin_var
       | "(" lin ")"
lin: term ("+" term)*
term: INT                   -> term_int
    | NAME                  -> term_var
    | INT "*" NAME          -> term_scaled

?ctx: ctx_pre
    | ctx "+" ctx_pre       -> ctx_sum
?ctx_pre: cset "." ctx_pre  -> ctx_prefix
        | "rec" NAME "." ctx_pre -> ctx_rec
        | "0"               -> ctx_nil
        | NAME              -> ctx_name
        | "(" ctx ")"

system: "[" (mix_item ("|" mix_item)*)? "]"
?mix_item: ctx
         | cset             -> state_item
         | "(" eset "-|" eset "->" eset ")" -> reaction_lit

?asrt: asrt_xor
     | asrt "or" asrt_xor   -> a_or
?asrt_xor: asrt_and
         | asrt_xor "xor" asrt_and -> a_xor
?asrt_and: asrt_not
         | asrt_and "and" asrt_not -> a_and
?asrt_not: "!" asrt_not     -> a_not
         | asrt_atom
?asrt_atom: cset "subset" NAME -> a_subset
          | NAME "subset" NAME -> a_name_subset
          | NAME "in" NAME  -> a_in
          | "?" "in" NAME   -> a_nonempty
          | "(" asrt ")"

?fml: fml_and
    | fml "or" fml_and      -> f_or
?fml_and: fml_modal
        | fml_and "and" fml_modal -> f_and
?fml_modal: "<" chi ">" fml_modal -> f_diamond
          | "[" chi "]" fml_modal -> f_box
          | "tt"            -> f_tt
          | "ff"            -> f_ff
          | "(" fml ")"
chi: NAME                   -> chi_pos
   | "!" NAME               -> chi_neg

asrt_start: asrt
fml_start: fml
process_start: system

NAME: /[A-Za-z_][A-Za-z0-9_]*/
INT: /[0-9]+/
COMMENT: /#[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""

_LARK = Lark(
    GRAMMAR,
    parser="lalr",
    start=["start", "asrt_start", "fml_start", "process_start"],
    propagate_positions=True,
    maybe_placeholders=False,
)


@dataclass
class Spec:
    """A resolved specification; every mapping keeps declaration order."""

    universe: FrozenSet[str] = frozenset()
    variables: FrozenSet[str] = frozenset()
    reactions: Dict[str, Reaction] = field(default_factory=dict)
    contexts: Dict[str, ContextExpr] = field(default_factory=dict)
    systems: Dict[str, Process] = field(default_factory=dict)
    assertions: Dict[str, Assertion] = field(default_factory=dict)
    formulas: Dict[str, BioHML] = field(default_factory=dict)
    links: Dict[str, ConnectedSystem] = field(default_factory=dict)

    def _lookup(self, table: Mapping[str, Any], kind: str, name: str) -> Any:
        if name not in table:
            known = ", ".join(table) or "none"
            raise UnknownNameError(f"unknown {kind} '{name}' (declared: {known})")
        return table[name]

    def system(self, name: str) -> Process:
        return self._lookup(self.systems, "system", name)

    def assertion(self, name: str) -> Assertion:
        return self._lookup(self.assertions, "assertion", name)

    def formula(self, name: str) -> BioHML:
        return self._lookup(self.formulas, "formula", name)

    def link(self, name: str) -> ConnectedSystem:
        return self._lookup(self.links, "link", name)

    def to_text(self) -> str:
        """Render back to DSL text that parses to an equal ``Spec``."""
        lines = []
        if self.universe:
            lines.append(f"entities {', '.join(sorted(self.universe))};")
        if self.variables:
            lines.append(f"variables {', '.join(sorted(self.variables))};")
        for name, a in self.reactions.items():
            lines.append(
                f"reaction {name}: [{a.reactant_multiset}] -| "
                f"[{format_set(a.inhibitors)}] -> [{a.product_multiset}];"
            )
        for name, k in self.contexts.items():
            lines.append(f"context {name} = {k};")
        for name, p in self.systems.items():
            lines.append(f"system {name} = {p};")
        for name, f in self.assertions.items():
            lines.append(f"assert {name} = {f};")
        for name, g in self.formulas.items():
            lines.append(f"formula {name} = {g};")
        for name, s in self.links.items():
            lines.append(
                f"link {name} = {self._link_operand(s.left)} "
                f"{{{format_set(s.link)}}} {self._link_operand(s.right)};"
            )
        return "\n".join(lines) + ("\n" if lines else "")

    def _link_operand(self, side: Union[Process, ConnectedSystem]) -> str:
        linked = isinstance(side, ConnectedSystem)
        table: Mapping = self.links if linked else self.systems
        for name, value in table.items():
            if value == side:
                return name
        raise ValueError(f"link operand {side} has no name in this specification")


def _pos(node: Union[Tree, Token, None]) -> Optional[SourcePos]:
    if isinstance(node, Token) and node.line is not None:
        return SourcePos(node.line, node.column)
    if isinstance(node, Tree) and not node.meta.empty:
        return SourcePos(node.meta.line, node.meta.column)
    return None


def _describe_terminal(name: str) -> str:
    try:
        term = _LARK.get_terminal(name)
    except KeyError:
        return name
    if term.pattern.type == "str":
        return repr(term.pattern.value)
    return name


def _syntax_error(exc: UnexpectedInput, text: str) -> SpecSyntaxError:
    line, column = getattr(exc, "line", -1), getattr(exc, "column", -1)
    if line is None or line < 1:
        lines = text.split("\n")
        line, column = len(lines), len(lines[-1]) + 1
    if isinstance(exc, UnexpectedCharacters):
        expected = exc.allowed or set()
        message = f"unexpected character {exc.char!r}"
    elif isinstance(exc, UnexpectedToken):
        expected = exc.expected or set()
        message = (
            "unexpected end of input"
            if exc.token.type == "$END"
            else f"unexpected {exc.token.type.lower()} {str(exc.token)!r}"
        )
    elif isinstance(exc, UnexpectedEOF):
        expected = set(exc.expected or ())
        message = "unexpected end of input"
    else:
        expected, message = set(), str(exc)
    described = sorted(
        {_describe_terminal(n) for n in expected if not n.startswith("$")}
    )
    if described:
        message += f"; expected one of {', '.join(described)}"
    return SpecSyntaxError(message, SourcePos(line, column), described)


def _parse_tree(text: str, start: str) -> Tree:
    try:
        return _LARK.parse(text, start=start)
    except UnexpectedInput as exc:
        raise _syntax_error(exc, text) from None


class _Builder:
    """Turns parse trees into terms, resolving names in declaration order."""

    def __init__(
        self,
        universe: Optional[AbstractSet[str]] = None,
        variables: Optional[AbstractSet[str]] = None,
        assertion_names: Optional[Iterable[str]] = None,
    ):
        self.universe = None if universe is None else frozenset(universe)
        self.variables = None if variables is None else frozenset(variables)
        self.spec = Spec(
            universe=self.universe or frozenset(),
            variables=self.variables or frozenset(),
        )
        self.assertion_names = set(assertion_names or ())
        self.errors: List[SpecError] = []

    def fail(self) -> None:
        if self.errors:
            first = self.errors[0]
            first.diagnostics = list(self.errors)
            raise first

    # -- entities and amounts ------------------------------------------------

    def entity(self, tok: Token) -> str:
        name = str(tok)
        if self.universe is not None and name not in self.universe:
            error = UnknownEntityError(f"undeclared entity '{name}'", _pos(tok))
            self.errors.append(error)
        return name

    def variable(self, tok: Token) -> str:
        name = str(tok)
        if self.variables is not None and name not in self.variables:
            error = UnknownNameError(f"undeclared variable '{name}'", _pos(tok))
            self.errors.append(error)
        return name

    def eset(self, tree: Tree) -> EntityMultiset:
        counts: Counter = Counter()
        for item in tree.children:
            if item.data == "eitem_one":
                counts[self.entity(item.children[0])] += 1
            else:
                n, name = item.children
                if int(n) <= 0:
                    raise SpecSyntaxError("multiplicities must be positive", _pos(n))
                counts[self.entity(name)] += int(n)
        return EntityMultiset.of(counts)

    def lin(self, tree: Tree) -> LinExpr:
        if tree.data == "lin_int":
            return LinExpr.const(int(tree.children[0]))
        if tree.data == "lin_var":
            return LinExpr.var(self.variable(tree.children[0]))
        total = LinExpr()
        for term in tree.children:
            if term.data == "term_int":
                total = total + LinExpr.const(int(term.children[0]))
            elif term.data == "term_var":
                total = total + LinExpr.var(self.variable(term.children[0]))
            else:
                k, name = term.children
                total = total + LinExpr.var(self.variable(name), int(k))
        return total

    def cset(self, tree: Tree) -> QuantContext:
        terms: Dict[str, LinExpr] = {}
        for item in tree.children:
            if item.data == "citem_one":
                name, amount = self.entity(item.children[0]), LinExpr.const(1)
            else:
                amount, name = self.lin(item.children[0]), self.entity(item.children[1])
            terms[name] = terms[name] + amount if name in terms else amount
        return QuantContext.of(terms)

    def plain_set(self, tree: Tree) -> EntitySet:
        offer = self.cset(tree)
        if any(e != LinExpr.const(1) for _, e in offer):
            raise SpecSyntaxError(
                "amounts are only allowed in context prefixes", _pos(tree)
            )
        return offer.support()

    def reaction(self, parts: List[Tree], pos: Optional[SourcePos]) -> Reaction:
        reactants, inhibitors, products = (self.eset(t) for t in parts)
        if not inhibitors.is_set():
            raise ReactionInvariantError("inhibitors form a plain set", pos)
        try:
            return Reaction.from_multisets(reactants, inhibitors.support(), products)
        except ReactionInvariantError as exc:
            raise ReactionInvariantError(exc.message, pos) from None

    # -- contexts and systems ------------------------------------------------

    def ctx(self, tree: Tree, bound: FrozenSet[str] = frozenset()) -> ContextExpr:
        kind = tree.data
        if kind == "ctx_sum":
            left, right = tree.children
            return choice(self.ctx(left, bound), self.ctx(right, bound))
        if kind == "ctx_prefix":
            offer = self.cset(tree.children[0])
            return Prefix.quantitative(offer, self.ctx(tree.children[1], bound))
        if kind == "ctx_rec":
            name_tok, body = tree.children
            rec = Rec(str(name_tok), self.ctx(body, bound | {str(name_tok)}))
            try:
                check_guarded(rec)
            except UnguardedRecursionError as exc:
                raise UnguardedRecursionError(exc.variable, _pos(name_tok)) from None
            return rec
        if kind == "ctx_nil":
            return NIL
        if kind == "ctx_name":
            tok = tree.children[0]
            name = str(tok)
            if name in bound:
                return Var(name)
            if name in self.spec.contexts:
                return self.spec.contexts[name]
            raise UnknownNameError(f"unknown context '{name}'", _pos(tok))
        raise SpecSyntaxError(f"not a context: {kind}", _pos(tree))

    def system(self, tree: Tree) -> Process:
        components: List = []
        reactions = self.spec.reactions
        for item in tree.children:
            if item.data == "state_item":
                components.append(self.plain_set(item.children[0]))
            elif item.data == "reaction_lit":
                components.append(self.reaction(item.children, _pos(item)))
            elif item.data == "ctx_name" and str(item.children[0]) in reactions:
                components.append(reactions[str(item.children[0])])
            else:
                components.append(self.ctx(item))
        return Process(normalize(*components))

    # -- assertions and formulas ---------------------------------------------

    def position(self, tok: Token) -> Position:
        try:
            return Position.parse(str(tok))
        except UnknownPositionError as exc:
            raise UnknownPositionError(exc.message, _pos(tok)) from None

    def asrt(self, tree: Tree) -> Assertion:
        kind = tree.data
        if kind == "a_or":
            return AOr(self.asrt(tree.children[0]), self.asrt(tree.children[1]))
        if kind == "a_xor":
            return Xor(self.asrt(tree.children[0]), self.asrt(tree.children[1]))
        if kind == "a_and":
            return AAnd(self.asrt(tree.children[0]), self.asrt(tree.children[1]))
        if kind == "a_not":
            return ANot(self.asrt(tree.children[0]))
        if kind == "a_subset":
            offered, pos = tree.children
            return SubsetOf(self.plain_set(offered), self.position(pos))
        if kind in ("a_name_subset", "a_in"):
            entity, pos = tree.children
            return SubsetOf(frozenset([self.entity(entity)]), self.position(pos))
        if kind == "a_nonempty":
            return NonEmpty(self.position(tree.children[0]))
        raise SpecSyntaxError(f"not an assertion: {kind}", _pos(tree))

    def chi(self, tree: Tree) -> Tuple[bool, str]:
        tok = tree.children[0]
        if str(tok) not in self.assertion_names:
            raise UnknownNameError(f"unknown assertion '{tok}'", _pos(tok))
        return tree.data == "chi_pos", str(tok)

    def fml(self, tree: Tree) -> BioHML:
        kind = tree.data
        if kind == "f_tt":
            return TT()
        if kind == "f_ff":
            return FF()
        if kind == "f_and":
            return FAnd(self.fml(tree.children[0]), self.fml(tree.children[1]))
        if kind == "f_or":
            return FOr(self.fml(tree.children[0]), self.fml(tree.children[1]))
        if kind in ("f_diamond", "f_box"):
            positive, name = self.chi(tree.children[0])
            body = self.fml(tree.children[1])
            return (Diamond if kind == "f_diamond" else Box)(positive, name, body)
        raise SpecSyntaxError(f"not a formula: {kind}", _pos(tree))

    # -- declarations --------------------------------------------------------

    def declare(
        self, table: Dict[str, Any], kind: str, tok: Token, value: Any
    ) -> None:
        name = str(tok)
        if name in table:
            raise DuplicateNameError(f"{kind} '{name}' is declared twice", _pos(tok))
        table[name] = value

    def link_operand(self, tok: Token, right: bool) -> Union[Process, ConnectedSystem]:
        name = str(tok)
        if name in self.spec.systems:
            return self.spec.systems[name]
        if not right and name in self.spec.links:
            return self.spec.links[name]
        raise UnknownNameError(f"unknown system '{name}'", _pos(tok))

    def decl(self, tree: Tree) -> None:
        kind = tree.data
        ch = tree.children
        spec = self.spec
        if kind in ("entities_decl", "variables_decl"):
            return
        if kind == "reaction_decl":
            reaction = self.reaction(ch[1:], _pos(ch[0]))
            self.declare(spec.reactions, "reaction", ch[0], reaction)
        elif kind == "context_decl":
            self.declare(spec.contexts, "context", ch[0], self.ctx(ch[1]))
        elif kind == "system_decl":
            if str(ch[0]) in spec.links:
                raise DuplicateNameError(f"'{ch[0]}' already names a link", _pos(ch[0]))
            self.declare(spec.systems, "system", ch[0], self.system(ch[1]))
        elif kind == "assert_decl":
            self.declare(spec.assertions, "assertion", ch[0], self.asrt(ch[1]))
            self.assertion_names.add(str(ch[0]))
        elif kind == "formula_decl":
            self.declare(spec.formulas, "formula", ch[0], self.fml(ch[1]))
        elif kind == "link_decl":
            if str(ch[0]) in spec.systems:
                raise DuplicateNameError(
                    f"'{ch[0]}' already names a system", _pos(ch[0])
                )
            left = self.link_operand(ch[1], right=False)
            link = self.plain_set(ch[2])
            right = self.link_operand(ch[3], right=True)
            self.declare(spec.links, "link", ch[0], ConnectedSystem(left, link, right))


def _collect_names(tree: Tree, kind: str) -> Dict[str, Token]:
    names: Dict[str, Token] = {}
    for decl in tree.children:
        if decl.data == kind:
            for tok in decl.children:
                names.setdefault(str(tok), tok)
    return names


def parse_spec(text: str) -> Spec:
    """
    Parse and resolve a specification.

    Args:
        text: ``.rs-spec`` source

    Returns:
        The resolved specification

    Raises:
        SpecError: The first problem found; ``diagnostics`` lists all of them
    """
    tree = _parse_tree(text, "start")
    universe = _collect_names(tree, "entities_decl")
    variables = _collect_names(tree, "variables_decl")
    builder = _Builder(universe.keys(), variables.keys())
    for name, tok in variables.items():
        if name in universe:
            builder.errors.append(
                DuplicateNameError(
                    f"'{name}' is both an entity and a variable", _pos(tok)
                )
            )
    for decl in tree.children:
        try:
            builder.decl(decl)
        except SpecError as exc:
            builder.errors.append(exc)
    builder.fail()
    return builder.spec


def parse_assertion(
    text: str, universe: Optional[AbstractSet[str]] = None
) -> Assertion:
    """
    Parse a single assertion such as ``(a in R) xor (c in R)``.

    Args:
        text: Assertion source
        universe: Declared entities; ``None`` skips the check

    Returns:
        The assertion
    """
    builder = _Builder(universe)
    result = builder.asrt(_parse_tree(text, "asrt_start").children[0])
    builder.fail()
    return result


def parse_formula(text: str, assertions: Iterable[str]) -> BioHML:
    """
    Parse a bioHML formula such as ``<!F1>[!F1]<!F1> tt``.

    Args:
        text: Formula source
        assertions: Names of the assertions the modalities may refer to

    Returns:
        The formula
    """
    builder = _Builder(assertion_names=assertions)
    return builder.fml(_parse_tree(text, "fml_start").children[0])


def parse_process(text: str, universe: Optional[AbstractSet[str]] = None) -> Process:
    """Parse a system term with reaction literals, as printed by ``str(Process)``."""
    builder = _Builder(universe)
    result = builder.system(_parse_tree(text, "process_start").children[0])
    builder.fail()
    return result
