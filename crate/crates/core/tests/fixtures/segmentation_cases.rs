// Hand-labeled snippets: text and the expected word count of every
// sentence under the default rules and the English lexicon.

pub const CASES: &[(&str, &[usize])] = &[
    ("Call me Ishmael. Some years ago I went to sea.", &[3, 7]),
    ("Mr. Starbuck was the chief mate. He was a Quaker.", &[6, 4]),
    ("Mrs. Hussey kept the inn. She made chowder.", &[5, 3]),
    ("Dr. Bunger and Capt. Boomer met. They talked.", &[6, 2]),
    ("Ask Dr. Watson. He knows.", &[3, 2]),
    ("St. Paul's was full. Prof. Jones spoke.", &[4, 3]),
    ("J. R. Smith wrote it. Nobody read it.", &[5, 3]),
    ("He met H. G. Wells in town. Wells smiled.", &[7, 2]),
    ("It was I. Then he ran.", &[3, 3]),
    ("Where was he going? Nobody knew.", &[4, 2]),
    ("Stop! Do not move!", &[1, 3]),
    ("What?! You did what?", &[1, 3]),
    ("He waited\u{2026} Nothing came.", &[2, 2]),
    ("He waited\u{2026} and waited. Then slept.", &[4, 2]),
    ("He waited... and waited. Then slept.", &[4, 2]),
    ("He waited. . . Nothing came.", &[2, 2]),
    ("He said (quietly) that it was late. We left.", &[7, 2]),
    ("He said it. (Nobody listened.) Then he left.", &[3, 2, 3]),
    ("She asked (why? nobody knew) and left. Done.", &[7, 1]),
    ("\u{201c}Go away.\u{201d} She shut the door.", &[2, 4]),
    ("\u{201c}Is it you?\u{201d} he asked. It was.", &[5, 2]),
    ("\"Come here!\" she cried. He came.", &[4, 2]),
    ("The price was 3.50 dollars. It rose.", &[5, 2]),
    ("There were 1,000 men. All drowned.", &[4, 2]),
    ("The sea-captain didn't care. Nor did I.", &[4, 3]),
    ("Chapter one. The whale.\n\nChapter two. The ship.", &[2, 2, 2, 2]),
    ("The cat sat. the dog ran. A bird sang.", &[6, 3]),
    ("Ahab vs. the whale. It ended badly.", &[4, 3]),
    ("Mr. and Mrs. Smith came. They stayed.", &[5, 2]),
    ("He read Gen. xii. It was long.", &[4, 3]),
    ("Lt. Col. Brown arrived. Salute.", &[4, 1]),
    ("One sentence with no end", &[]),
    ("Done. Then a tail without end", &[1]),
    ("\u{ab}Qui est l\u{e0}?\u{bb} Personne.", &[3, 1]),
    ("Who? Me? Yes.", &[1, 1, 1]),
];
