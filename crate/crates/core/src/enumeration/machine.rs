//! Three-register Minsky machines and their Gödel numbering.
//!
//! Instructions get natural codes `INC r -> r`, `HALT -> 3`,
//! `DECJZ r t -> 4 + 3t + r`. A program with codes `c_1, ..., c_L` is
//! serialized over the digits `{1, 2}` as `1^{c_1} 2 1^{c_2} 2 ... 1^{c_L}`
//! with the final separator implicit, and that digit string is read as a
//! bijective base-2 numeral `w`. Index 0 is the empty program and index
//! `w + 1` is the program whose string has value `w`. Every natural number
//! decodes to exactly one program and encoding inverts decoding.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub const REGISTERS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instruction {
    Inc(u8),
    /// If register `r` is zero jump to `target`, otherwise decrement it and fall through.
    DecJz(u8, usize),
    Halt,
}

impl Instruction {
    fn code(self) -> u64 {
        match self {
            Instruction::Inc(r) => r as u64,
            Instruction::Halt => 3,
            Instruction::DecJz(r, t) => 4 + 3 * t as u64 + r as u64,
        }
    }

    fn from_code(c: u64) -> Instruction {
        match c {
            0..=2 => Instruction::Inc(c as u8),
            3 => Instruction::Halt,
            _ => Instruction::DecJz(((c - 4) % 3) as u8, ((c - 4) / 3) as usize),
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Inc(r) => write!(f, "INC {r}"),
            Instruction::DecJz(r, t) => write!(f, "DECJZ {r} {t}"),
            Instruction::Halt => f.write_str("HALT"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Program {
    pub instructions: Vec<Instruction>,
}

impl Program {
    pub fn new(instructions: Vec<Instruction>) -> Self {
        assert!(
            instructions.iter().all(|i| !matches!(i, Instruction::Inc(r) | Instruction::DecJz(r, _) if *r as usize >= REGISTERS)),
            "register out of range"
        );
        Program { instructions }
    }

    pub fn decode(index: &BigUint) -> Program {
        if index.is_zero() {
            return Program::default();
        }
        // bijective base-2 digits of index - 1, most significant first
        let mut w = index - 1u32;
        let mut digits = Vec::new();
        while !w.is_zero() {
            let two = BigUint::from(2u32);
            let (mut q, mut r) = w.div_rem(&two);
            if r.is_zero() {
                r = two;
                q -= 1u32;
            }
            digits.push(r.to_u8().unwrap());
            w = q;
        }
        digits.reverse();

        let mut instructions = Vec::new();
        let mut run = 0u64;
        for d in digits {
            if d == 1 {
                run += 1;
            } else {
                instructions.push(Instruction::from_code(run));
                run = 0;
            }
        }
        instructions.push(Instruction::from_code(run));
        Program { instructions }
    }

    pub fn decode_u64(index: u64) -> Program {
        Program::decode(&BigUint::from(index))
    }

    pub fn encode(&self) -> BigUint {
        if self.instructions.is_empty() {
            return BigUint::zero();
        }
        let mut w = BigUint::zero();
        let two = BigUint::from(2u32);
        for (i, ins) in self.instructions.iter().enumerate() {
            if i > 0 {
                w = &w * &two + 2u32;
            }
            for _ in 0..ins.code() {
                w = &w * &two + 1u32;
            }
        }
        w + BigUint::one()
    }

    /// Runs from all-zero registers. Returns the number of steps taken to
    /// halt, or `None` if still running after `budget` steps. Executing
    /// `HALT` costs one step; falling off the end costs nothing.
    pub fn halting_time(&self, budget: u64) -> Option<u64> {
        let mut run = Run::new();
        while run.steps <= budget {
            if run.halted(self) {
                return Some(run.steps);
            }
            if run.steps == budget {
                break;
            }
            run.step(self);
        }
        None
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.instructions.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join("; "))
    }
}

/// Interpreter state, advanced one instruction at a time.
#[derive(Clone, Debug)]
pub(crate) struct Run {
    pc: usize,
    registers: [u64; REGISTERS],
    stopped: bool,
    pub(crate) steps: u64,
}

impl Run {
    pub(crate) fn new() -> Self {
        Run { pc: 0, registers: [0; REGISTERS], stopped: false, steps: 0 }
    }

    pub(crate) fn halted(&self, program: &Program) -> bool {
        self.stopped || self.pc >= program.instructions.len()
    }

    pub(crate) fn step(&mut self, program: &Program) {
        match program.instructions[self.pc] {
            Instruction::Inc(r) => {
                self.registers[r as usize] += 1;
                self.pc += 1;
            }
            Instruction::DecJz(r, target) => {
                let reg = &mut self.registers[r as usize];
                if *reg == 0 {
                    self.pc = target;
                } else {
                    *reg -= 1;
                    self.pc += 1;
                }
            }
            Instruction::Halt => self.stopped = true,
        }
        self.steps += 1;
    }
}

/// Whether program number `n` halts within `s` steps.
pub fn machine_halts_within(n: u64, s: u64) -> bool {
    Program::decode_u64(n).halting_time(s).is_some()
}
