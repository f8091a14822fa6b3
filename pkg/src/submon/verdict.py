"""Decision outcomes.

A verdict is one of member / non-member / unknown.  Member verdicts carry a
witness: a list of generator spellings whose product equals the query in the
group.  Non-member verdicts carry a certificate record explaining why no
witness can exist.  Unknown verdicts may carry a machine-readable instance
for an external decision procedure, plus the bound the search exhausted.
"""

MEMBER = "member"
NON_MEMBER = "non-member"
UNKNOWN = "unknown"


class Verdict:
    def __init__(self, outcome, witness=None, certificate=None, methods=(),
                 instance=None, bound=None):
        if outcome not in (MEMBER, NON_MEMBER, UNKNOWN):
            raise ValueError(f"bad outcome {outcome!r}")
        if outcome == MEMBER and witness is None:
            raise ValueError("member verdict requires a witness")
        if outcome != MEMBER and witness is not None:
            raise ValueError("only member verdicts carry a witness")
        self.outcome = outcome
        self.witness = list(witness) if witness is not None else None
        self.certificate = certificate
        self.methods = list(methods)
        self.instance = instance
        self.bound = bound

    @classmethod
    def member(cls, witness, methods=(), certificate=None, bound=None):
        return cls(MEMBER, witness=witness, methods=methods,
                   certificate=certificate, bound=bound)

    @classmethod
    def non_member(cls, certificate, methods=(), bound=None):
        return cls(NON_MEMBER, certificate=certificate, methods=methods,
                   bound=bound)

    @classmethod
    def unknown(cls, methods=(), certificate=None, instance=None, bound=None):
        return cls(UNKNOWN, certificate=certificate, methods=methods,
                   instance=instance, bound=bound)

    @property
    def is_member(self):
        return self.outcome == MEMBER

    @property
    def is_non_member(self):
        return self.outcome == NON_MEMBER

    @property
    def is_unknown(self):
        return self.outcome == UNKNOWN

    def to_dict(self):
        out = {
            "verdict": self.outcome,
            "method": self.methods,
            "witness": self.witness,
            "certificate": self.certificate,
            "bound": self.bound,
        }
        if self.instance is not None:
            serialize = getattr(self.instance, "serialize", None)
            out["instance"] = serialize() if serialize else self.instance
        return out

    def __repr__(self):
        bits = [self.outcome]
        if self.witness is not None:
            bits.append(f"witness={self.witness}")
        if self.methods:
            bits.append("via " + "+".join(self.methods))
        return f"<Verdict {' '.join(bits)}>"
