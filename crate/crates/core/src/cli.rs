//! The `tb` command line. `run` never panics on malformed input and never
//! touches the process; `main` only forwards its result.

use std::io::Read;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::circle::{Angle, PLCircleMap};
use crate::diagram::ArcDiagram;
use crate::element::Element;
use crate::lamination::{gap_color, gap_depth, is_central, GapId};
use crate::membership::recognize;
use crate::render::{render_diagram, render_element, RenderStyle};
use crate::thompson_t::{tau, tau_inv, ThompsonError, TreePair};
use crate::words::{abelianize, decompose, eval_word, random_element, transport_gap_to_center, Word};

#[derive(Debug, Parser)]
#[command(name = "tb", version, about = "Exact arithmetic for the Basilica Thompson group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ElementArg {
    /// Element as "[domain ; range ; offset]" (read from stdin if omitted)
    #[arg(long)]
    element: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the reduced form of an element
    Reduce(ElementArg),
    /// Compose elements, rightmost applied first
    Compose {
        /// Repeat at least twice; one element per line on stdin if omitted
        #[arg(long = "element")]
        elements: Vec<String>,
    },
    /// Print the inverse of an element
    Invert(ElementArg),
    /// Evaluate an element or word at an angle
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        angle: String,
        #[arg(long, conflicts_with = "word")]
        element: Option<String>,
        #[arg(long)]
        word: Option<String>,
    },
    /// Recognize a PL circle map "x:y,x:y,..." as an element
    Recognize {
        #[arg(long)]
        pl: Option<String>,
    },
    /// Write an element as a word in a, b, g, d
    Decompose(ElementArg),
    /// Evaluate a word such as "a b' d"
    Word {
        #[arg(long)]
        word: Option<String>,
    },
    /// Map a rist(C) element to Thompson's group T, or back with --tree-pair
    Tau {
        #[arg(long, conflicts_with = "tree_pair")]
        element: Option<String>,
        #[arg(long)]
        tree_pair: Option<String>,
    },
    /// Print 0 if the element preserves the gap coloring, else 1
    Abelianize(ElementArg),
    /// Describe a gap, or its image under an element
    Gap {
        /// "central" or "behind {a, b}"
        #[arg(long)]
        gap: Option<String>,
        #[arg(long)]
        element: Option<String>,
    },
    /// Evaluate a seeded random word
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        length: usize,
    },
    /// Draw an element or an arc diagram as SVG
    Render {
        #[arg(long, conflicts_with = "diagram")]
        element: Option<String>,
        #[arg(long)]
        diagram: Option<String>,
        /// geodesic or chord
        #[arg(long, default_value = "geodesic")]
        style: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

impl Outcome {
    fn ok(text: impl Into<Vec<u8>>) -> Outcome {
        Outcome {
            code: 0,
            stdout: text.into(),
            stderr: String::new(),
        }
    }

    fn line(text: impl std::fmt::Display) -> Outcome {
        Outcome::ok(format!("{}\n", text))
    }

    fn error(message: impl std::fmt::Display) -> Outcome {
        Outcome {
            code: 1,
            stdout: Vec::new(),
            stderr: format!("error: {}\n", message),
        }
    }

    fn reject(code: &str, witness: &str) -> Outcome {
        Outcome {
            code: 2,
            stdout: format!("REJECT {} {}\n", code, witness).into_bytes(),
            stderr: String::new(),
        }
    }

    pub fn stdout_text(&self) -> String {
        String::from_utf8_lossy(&self.stdout).into_owned()
    }
}

type Step<T> = Result<T, Outcome>;

fn input(flag: Option<String>, stdin: &mut dyn Read, what: &str) -> Step<String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    let mut buf = String::new();
    stdin
        .read_to_string(&mut buf)
        .map_err(|e| Outcome::error(format!("reading stdin: {}", e)))?;
    let text = buf.trim();
    if text.is_empty() {
        return Err(Outcome::error(format!(
            "missing {} (pass it as a flag or on stdin)",
            what
        )));
    }
    Ok(text.to_string())
}

fn parse<T: std::str::FromStr>(text: &str) -> Step<T>
where
    T::Err: std::fmt::Display,
{
    text.trim().parse::<T>().map_err(Outcome::error)
}

fn element(flag: Option<String>, stdin: &mut dyn Read) -> Step<Element> {
    parse(&input(flag, stdin, "element")?)
}

fn first_noncentral(f: &Element) -> String {
    f.domain()
        .arcs()
        .into_iter()
        .chain(f.range().arcs())
        .find(|a| !is_central(a))
        .map(|a| a.compact())
        .unwrap_or_else(|| "-".to_string())
}

fn dispatch(command: Command, stdin: &mut dyn Read) -> Step<Outcome> {
    Ok(match command {
        Command::Reduce(a) => Outcome::line(element(a.element, stdin)?.reduce()),
        Command::Invert(a) => Outcome::line(element(a.element, stdin)?.inverse()),
        Command::Compose { elements } => {
            let texts = if elements.is_empty() {
                input(None, stdin, "elements")?
                    .lines()
                    .filter(|l| !l.trim().is_empty())
                    .map(String::from)
                    .collect()
            } else {
                elements
            };
            if texts.len() < 2 {
                return Err(Outcome::error("compose needs at least two elements"));
            }
            let mut acc = Element::identity();
            for t in &texts {
                acc = acc.compose(&parse::<Element>(t)?);
            }
            Outcome::line(acc)
        }
        Command::Eval { angle, element, word } => {
            let t: Angle = parse(&angle)?;
            let f = match (element, word) {
                (_, Some(w)) => eval_word(&parse(&w)?),
                (e, None) => self::element(e, stdin)?,
            };
            Outcome::line(f.evaluate(&t))
        }
        Command::Recognize { pl } => {
            let f: PLCircleMap = parse(&input(pl, stdin, "PL map")?)?;
            match recognize(&f) {
                Ok(e) => Outcome::line(e),
                Err(e) => Outcome::reject(e.code(), &e.witness()),
            }
        }
        Command::Decompose(a) => Outcome::line(decompose(&element(a.element, stdin)?)),
        Command::Word { word } => {
            let w: Word = parse(&input(word, stdin, "word")?)?;
            Outcome::line(eval_word(&w))
        }
        Command::Tau { element: e, tree_pair } => match tree_pair {
            Some(t) => Outcome::line(tau_inv(&parse::<TreePair>(&t)?)),
            None => {
                let f = element(e, stdin)?;
                match tau(&f) {
                    Ok(t) => Outcome::line(t),
                    Err(ThompsonError::NotInRist) => Outcome::reject("NotInRist", &first_noncentral(&f)),
                    Err(other) => return Err(Outcome::error(other)),
                }
            }
        },
        Command::Abelianize(a) => Outcome::line(abelianize(&element(a.element, stdin)?)),
        Command::Gap { gap, element: e } => {
            let g: GapId = parse(&input(gap, stdin, "gap")?)?;
            match e {
                Some(text) => {
                    let f: Element = parse(&text)?;
                    Outcome::line(f.image_of_gap(&g).map_err(Outcome::error)?)
                }
                None => Outcome::ok(format!(
                    "depth={}\ncolor={}\ntransport={}\n",
                    gap_depth(&g),
                    gap_color(&g),
                    transport_gap_to_center(&g)
                )),
            }
        }
        Command::Random { seed, length } => Outcome::line(random_element(seed, length)),
        Command::Render {
            element: e,
            diagram,
            style,
            out,
        } => {
            let style: RenderStyle = parse(&style)?;
            let svg = match diagram {
                Some(d) => render_diagram(&parse::<ArcDiagram>(&d)?, style),
                None => render_element(&element(e, stdin)?, style),
            };
            match out {
                Some(path) => {
                    std::fs::write(&path, &svg).map_err(|e| Outcome::error(format!("{}: {}", path.display(), e)))?;
                    Outcome::ok(Vec::new())
                }
                None => Outcome::ok(svg),
            }
        }
    })
}

/// Runs one command line (including the program name in `args[0]`).
pub fn run<I, S>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome {
                    code: 1,
                    stdout: Vec::new(),
                    stderr: text,
                },
            };
        }
    };
    dispatch(cli.command, stdin).unwrap_or_else(|e| e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tb(args: &[&str]) -> Outcome {
        let mut argv = vec!["tb"];
        argv.extend_from_slice(args);
        run(argv, &mut std::io::empty())
    }

    #[test]
    fn eval_delta() {
        let out = tb(&["eval", "--word", "d", "--angle", "0"]);
        assert_eq!((out.code, out.stdout_text()), (0, "1/2\n".to_string()));
    }

    #[test]
    fn reject_rotation() {
        let out = tb(&["recognize", "--pl", "0:1/3"]);
        assert_eq!(
            (out.code, out.stdout_text()),
            (2, "REJECT ArcNotPreserved {1/3,2/3}\n".to_string())
        );
    }

    #[test]
    fn reduce_identity() {
        let out = tb(&["reduce", "--element", "[.,.,.,. ; .,.,.,. ; 0]"]);
        assert_eq!(out.stdout_text(), "[.,.,.,. ; .,.,.,. ; 0]\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(tb(&["--help"]).code, 0);
        assert_eq!(tb(&["--version"]).code, 0);
        assert_eq!(tb(&["frobnicate"]).code, 1);
        assert_eq!(tb(&["reduce"]).code, 1);
        assert_eq!(tb(&["reduce", "--element", "[.,. ; .,. ; 0]"]).code, 1);
        assert_eq!(tb(&["compose", "--element", "[.,.,.,. ; .,.,.,. ; 0]"]).code, 1);
    }

    #[test]
    fn stdin_fallback() {
        let mut input: &[u8] = b"a a\n";
        let out = run(["tb", "word"], &mut input);
        assert_eq!(out.code, 0);
        let mut input: &[u8] = b"[.,.,.,. ; .,.,.,. ; 2]\n";
        assert_eq!(run(["tb", "abelianize"], &mut input).stdout_text(), "0\n");
    }
}
