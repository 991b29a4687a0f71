//! Building the layered query graph of one line and looking at the sets the
//! lazy engine computes: liveness, last open queries and back-references.

use semre::matcher::Matcher;
use semre::oracle::Builtin;
use semre::query_graph::to_dot;
use semre::snfa::StateLabel;
use semre::syntax::parse_semre;

fn main() {
    let r = parse_semre(".*a<pal>").unwrap();
    let oracle = Builtin::Palindrome;
    let m = Matcher::new(&r, &oracle).unwrap();
    let w = b"babccb";
    let g = m.query_graph(w);
    println!(
        "{} states, line of {} characters: {} vertices",
        m.snfa().num_states(),
        g.n(),
        g.num_vertices()
    );

    let mut ins = m.inspect(w, &oracle);
    let end = ins.graph().end();
    println!("end vertex alive: {}", ins.alive(end).unwrap());
    for i in 1..=w.len() + 1 {
        for s in m.snfa().states() {
            if let StateLabel::Close(_) = m.snfa().label(s) {
                let v = semre::query_graph::Vertex::new(s, 1, i);
                if ins.alive(v).unwrap() {
                    let pending: Vec<usize> = ins.loq(v).unwrap().iter().map(|u| u.index).collect();
                    let accepted: Vec<usize> = ins.aq(v).unwrap().iter().map(|u| u.index).collect();
                    let enclosing = ins.backref(v).unwrap().len();
                    println!(
                        "close state {s} at index {i} is alive: windows opened at {pending:?}, accepted {accepted:?}, {enclosing} enclosing opens"
                    );
                }
            }
        }
    }
    if std::env::args().any(|a| a == "--dot") {
        print!("{}", to_dot(&m.query_graph(w), 5000).expect("small graph"));
    }
}
