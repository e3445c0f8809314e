//! Operation counting.
//!
//! Every arithmetic kernel reports into a thread-local [`OpLedger`]. Each
//! counter is kept twice: `all` sees every operation, however deeply nested,
//! while `top` only sees operations started outside any composite operation.
//! A scalar multiplication therefore shows up in `top` as one `ScalarMul`,
//! and its doublings and additions show up only in `all`.

use std::cell::RefCell;
use std::fmt;

/// Kinds of counted operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    /// Base-field multiplication.
    Mul,
    /// Base-field squaring.
    Sq,
    /// Base-field inversion.
    Inv,
    /// Base-field exponentiation.
    Exp,
    /// Base-field multiplication spent inside an extension-field operation.
    MulInExt,
    MulK,
    SqK,
    InvK,
    EcAdd,
    EcDbl,
    ScalarMul,
    MapToPoint,
    MillerLoop,
    FinalExp,
    Pairing,
    RatioPairing,
    GtMul,
    GtExp,
    GtInv,
    GtDiv,
    /// Multiplication modulo the group order.
    ZMul,
    /// Inversion modulo the group order.
    ZInv,
    /// Exponentiation modulo the group order.
    ZExp,
}

impl Op {
    pub const ALL: [Op; 23] = [
        Op::Mul,
        Op::Sq,
        Op::Inv,
        Op::Exp,
        Op::MulInExt,
        Op::MulK,
        Op::SqK,
        Op::InvK,
        Op::EcAdd,
        Op::EcDbl,
        Op::ScalarMul,
        Op::MapToPoint,
        Op::MillerLoop,
        Op::FinalExp,
        Op::Pairing,
        Op::RatioPairing,
        Op::GtMul,
        Op::GtExp,
        Op::GtInv,
        Op::GtDiv,
        Op::ZMul,
        Op::ZInv,
        Op::ZExp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Op::Mul => "mul",
            Op::Sq => "sq",
            Op::Inv => "inv",
            Op::Exp => "exp",
            Op::MulInExt => "mul_in_ext",
            Op::MulK => "mul_k",
            Op::SqK => "sq_k",
            Op::InvK => "inv_k",
            Op::EcAdd => "ecadd",
            Op::EcDbl => "ecdbl",
            Op::ScalarMul => "scalar_mul",
            Op::MapToPoint => "map_to_point",
            Op::MillerLoop => "miller_loop",
            Op::FinalExp => "final_exp",
            Op::Pairing => "pairing",
            Op::RatioPairing => "ratio_pairing",
            Op::GtMul => "gt_mul",
            Op::GtExp => "gt_exp",
            Op::GtInv => "gt_inv",
            Op::GtDiv => "gt_div",
            Op::ZMul => "z_mul",
            Op::ZInv => "z_inv",
            Op::ZExp => "z_exp",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Scheme phase a measurement belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    Setup,
    Extract,
    Encrypt,
    Decrypt,
}

impl Phase {
    pub const ALL: [Phase; 4] = [Phase::Setup, Phase::Extract, Phase::Encrypt, Phase::Decrypt];

    pub fn name(self) -> &'static str {
        match self {
            Phase::Setup => "setup",
            Phase::Extract => "extract",
            Phase::Encrypt => "encrypt",
            Phase::Decrypt => "decrypt",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A vector of counters, one per [`Op`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts([u64; Op::ALL.len()]);

impl Counts {
    pub fn get(&self, op: Op) -> u64 {
        self.0[op.index()]
    }

    pub fn set(&mut self, op: Op, value: u64) {
        self.0[op.index()] = value;
    }

    pub fn add(&mut self, op: Op, n: u64) {
        self.0[op.index()] += n;
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Per-counter difference `self - earlier`.
    ///
    /// Panics if a counter went backwards, which would mean the snapshots
    /// were taken out of order.
    pub fn since(&self, earlier: &Counts) -> Counts {
        let mut out = Counts::default();
        for op in Op::ALL {
            let (now, then) = (self.get(op), earlier.get(op));
            assert!(now >= then, "ledger counter {} decreased", op.name());
            out.set(op, now - then);
        }
        out
    }

    pub fn merge(&mut self, other: &Counts) {
        for op in Op::ALL {
            self.add(op, other.get(op));
        }
    }

    /// Nonzero counters in declaration order.
    pub fn nonzero(&self) -> Vec<(Op, u64)> {
        Op::ALL
            .iter()
            .filter(|&&op| self.get(op) != 0)
            .map(|&op| (op, self.get(op)))
            .collect()
    }
}

impl fmt::Display for Counts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .nonzero()
            .into_iter()
            .map(|(op, n)| format!("{}={}", op.name(), n))
            .collect();
        if parts.is_empty() {
            f.write_str("{}")
        } else {
            write!(f, "{{{}}}", parts.join(", "))
        }
    }
}

/// Accumulated counts for one thread.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpLedger {
    pub all: Counts,
    pub top: Counts,
}

impl OpLedger {
    pub fn since(&self, earlier: &OpLedger) -> OpLedger {
        OpLedger {
            all: self.all.since(&earlier.all),
            top: self.top.since(&earlier.top),
        }
    }

    pub fn merge(&mut self, other: &OpLedger) {
        self.all.merge(&other.all);
        self.top.merge(&other.top);
    }
}

struct State {
    ledger: OpLedger,
    depth: u32,
    paused: u32,
}

thread_local! {
    static STATE: RefCell<State> = const {
        RefCell::new(State { ledger: OpLedger { all: Counts([0; Op::ALL.len()]), top: Counts([0; Op::ALL.len()]) }, depth: 0, paused: 0 })
    };
}

/// Count one operation.
#[inline]
pub fn record(op: Op) {
    record_n(op, 1);
}

/// Count `n` operations of the same kind.
#[inline]
pub fn record_n(op: Op, n: u64) {
    STATE.with(|s| {
        let mut s = s.borrow_mut();
        if s.paused > 0 {
            return;
        }
        s.ledger.all.add(op, n);
        if s.depth == 0 {
            s.ledger.top.add(op, n);
        }
    });
}

/// Count `op` and run `f` one nesting level deeper.
pub fn nested<T>(op: Op, f: impl FnOnce() -> T) -> T {
    record(op);
    within(f)
}

/// Run `f` one nesting level deeper without counting anything for the
/// wrapper itself.
pub fn within<T>(f: impl FnOnce() -> T) -> T {
    struct Guard;
    impl Drop for Guard {
        fn drop(&mut self) {
            STATE.with(|s| s.borrow_mut().depth -= 1);
        }
    }
    STATE.with(|s| s.borrow_mut().depth += 1);
    let _g = Guard;
    f()
}

/// Run `f` with counting switched off.
pub fn untracked<T>(f: impl FnOnce() -> T) -> T {
    struct Guard;
    impl Drop for Guard {
        fn drop(&mut self) {
            STATE.with(|s| s.borrow_mut().paused -= 1);
        }
    }
    STATE.with(|s| s.borrow_mut().paused += 1);
    let _g = Guard;
    f()
}

/// Immutable copy of this thread's ledger.
pub fn snapshot() -> OpLedger {
    STATE.with(|s| s.borrow().ledger)
}

/// Zero this thread's ledger.
pub fn reset() {
    STATE.with(|s| s.borrow_mut().ledger = OpLedger::default());
}

/// Run `f` and return its result with the ledger difference it caused.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, OpLedger) {
    let before = snapshot();
    let out = f();
    (out, snapshot().since(&before))
}

/// Ledger difference for one scheme phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseProfile {
    pub phase: Phase,
    pub ledger: OpLedger,
}

/// Run `f` as `phase` and tag the resulting ledger difference.
pub fn measure_phase<T>(phase: Phase, f: impl FnOnce() -> T) -> (T, PhaseProfile) {
    let (out, ledger) = measure(f);
    (out, PhaseProfile { phase, ledger })
}
