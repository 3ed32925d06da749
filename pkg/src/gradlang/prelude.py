"""Standard library written in the language itself, loaded at startup.

`receive` pays an amount of a currency by scaling a one-unit contract.
`european_stock_option` builds a European option contract from a record of
terms; the strike is lifted into an observable explicitly with `const`
since bare doubles and observables do not mix implicitly.  `receive_dyn`
is the gradually typed variant of `receive`: the generalized multiplication
operator `**` accepts a dynamic second argument and delegates to `scale`
when it turns out to be a contract at runtime.
"""

from __future__ import annotations

from . import syntax as S
from .diagnostics import LangError

SNIPPETS: list[tuple[str, str]] = [
    (
        "receive",
        "let receive currency amount = scale amount (one currency)",
    ),
    (
        "european_stock_option",
        """
let european_stock_option args =
  let first = stock_price args.effective_date args.company in
  let last = stock_price args.expiry_date args.company in
  let payoff = match args.call_or_put with
    | Call -> (last / first - const args.strike)
    | Put -> (const args.strike - last / first)
  in
  european args.expiry_date (receive args.currency payoff)
""",
    ),
    (
        "receive_dyn",
        "let receive_dyn currency amount = amount ** one currency",
    ),
]

PRELUDE_SOURCE = "\n".join(src.strip() + "\n" for _, src in SNIPPETS)


def load_prelude(session) -> None:
    """Parse, infer and evaluate every prelude snippet into the session.

    Any failure aborts startup naming the offending snippet.
    """
    for name, source in SNIPPETS:
        try:
            rec, bound_name, term = S.parse_binding(source.strip())
            session.bind_term(rec, bound_name, term)
        except LangError as err:
            raise LangError(f"prelude snippet '{name}' failed to load: {err}") from err
