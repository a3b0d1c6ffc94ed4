//! Small instances known to separate the operator classes. Generated from
//! the witness directories shipped with the test suite; a test keeps the
//! two in sync.

pub(crate) struct GoldenInstance {
    pub name: &'static str,
    pub forget: &'static [&'static str],
    pub program: &'static str,
    pub partner: Option<&'static str>,
}

pub(crate) const GOLDEN: &[GoldenInstance] = &[
    GoldenInstance {
        name: "cp-r",
        forget: &["b"],
        program: "#atoms b, c.\nb :- not not b.\nc :- b.\n",
        partner: None,
    },
    GoldenInstance {
        name: "cp-sp",
        forget: &["a"],
        program: "#atoms a, b, c.\na :- not not a.\na | c.\nb :- a.\n",
        partner: None,
    },
    GoldenInstance {
        name: "sc-sp",
        forget: &["a"],
        program: "#atoms a, b, c.\na :- not not a.\na | c.\nb :- a.\n",
        partner: None,
    },
    GoldenInstance {
        name: "si-m",
        forget: &["a"],
        program: "#atoms a, b, c.\na :- not not a.\na | c.\nb :- a.\n",
        partner: None,
    },
    GoldenInstance {
        name: "sp-m",
        forget: &["a"],
        program: "#atoms a, b, c.\na :- not not a.\na | c.\nb :- a.\n",
        partner: None,
    },
    GoldenInstance {
        name: "sp-r",
        forget: &["a"],
        program: "#atoms a, c.\na :- not not a.\na | c.\n",
        partner: None,
    },
    GoldenInstance {
        name: "sp-sp",
        forget: &["a"],
        program: "#atoms a, b, c.\na :- not not a.\na | c.\nb :- a.\n",
        partner: None,
    },
    GoldenInstance {
        name: "ssp-sp",
        forget: &["a"],
        program: "#atoms a, b, c.\na :- not not a.\na | c.\nb :- a.\n",
        partner: None,
    },
    GoldenInstance {
        name: "w-m",
        forget: &["b"],
        program: "#atoms b, d.\nb | d.\n",
        partner: None,
    },
    GoldenInstance {
        name: "w-r",
        forget: &["b", "c"],
        program: "#atoms b, c, d.\nb | d :- not c.\n",
        partner: None,
    },
    GoldenInstance {
        name: "w-sp",
        forget: &["a"],
        program: "#atoms a, c.\na | c.\n",
        partner: None,
    },
    GoldenInstance {
        name: "wc-r",
        forget: &["b"],
        program: "#atoms b, c.\nb :- not not b.\nc :- b.\n",
        partner: None,
    },
    GoldenInstance {
        name: "we-r",
        forget: &["b"],
        program: "#atoms a, b, c.\na | b | c.\nb :- not not b.\n",
        partner: Some("#atoms a, b, c.\na :- not b, not c, not not a.\nb :- not a, not c, not not b.\nc :- not a, not b, not not c.\n:- not a, not b, not c.\n"),
    },
    GoldenInstance {
        name: "we-sp",
        forget: &["c"],
        program: "#atoms a, b, c.\na | c :- not not b.\nb :- c.\nc :- not not c.\n",
        partner: Some("#atoms a, b, c.\nb :- c, not a, not not b.\nb | c :- not a, not not b, not not c.\nc :- b, not a, not not c.\n"),
    },
    GoldenInstance {
        name: "wsp-m",
        forget: &["a"],
        program: "#atoms a, b, c.\na :- not not a.\na | c.\nb :- a.\n",
        partner: None,
    },
    GoldenInstance {
        name: "wsp-r",
        forget: &["a"],
        program: "#atoms a, c.\na :- not not a.\na | c.\n",
        partner: None,
    },
];
