"""Questions with hand-assigned reasoning classes, drawn from worked examples."""

from conftest import make_question

SERVICES_PARA = "The sector decreased by 7.8 percent in 2002, before rebounding in 2003."


def cases():
    return [
        (make_question("How many years did it take for the services sector to rebound?", SERVICES_PARA,
                       answer="1", qid="services"), {"difference"}),
        (make_question("How many days passed between the Sendling Christmas Day Massacre and the Battle of Aidenbach?",
                       "The Sendling Christmas Day Massacre took place on 25 December 1705. "
                       "The Battle of Aidenbach followed on 8 January 1706.", answer="14", qid="aidenbach"),
         {"difference"}),
        (make_question("Which ancestral group is smaller: Irish or Italian?",
                       "Of the residents, 12.2% were of Irish ancestry and 6.1% were of Italian ancestry.",
                       answer="Italian", qid="ancestry"), {"comparison"}),
        (make_question("How many percent of the national population does not live in Bangkok?",
                       "About 12.6 percent of the national population lives in Bangkok, the capital.",
                       answer="87.4", qid="bangkok"), {"complementation"}),
        (make_question("12 Years a Slave starred what British actor born 10 July 1977)",
                       "12 Years a Slave is a 2013 historical drama film starring Chiwetel Ejiofor.",
                       "Chiwetel Umeadi Ejiofor (born 10 July 1977) is a British actor.",
                       titles=["12 Years a Slave (film)", "Chiwetel Ejiofor"],
                       answer="Chiwetel Umeadi Ejiofor", qid="slave"), {"composition"}),
        (make_question("How many children's books has the writer of the sitcom Maid Marian and her Merry Men written ?",
                       "Maid Marian and her Merry Men is a British sitcom written by Tony Robinson.",
                       "Tony Robinson is an English actor who has written sixteen children's books.",
                       titles=["Maid Marian and her Merry Men", "Tony Robinson"], answer="sixteen",
                       qid="maid-marian"), {"composition"}),
        (make_question("Who is a politician and an actor?",
                       "Arnold Schwarzenegger served as Governor of California.",
                       "Arnold Schwarzenegger starred in The Terminator.",
                       titles=["Governors of California", "The Terminator"],
                       answer="Arnold Schwarzenegger", qid="politician-actor"), {"conjunction"}),
        # boolean conjunction is outside the five classes
        (make_question("Did Holland's Magazine and Moondance both begin in 1996?",
                       "Holland's Magazine was a monthly magazine founded in 1876.",
                       "Moondance is an American magazine founded in 1996.",
                       titles=["Holland's Magazine", "Moondance (magazine)"], answer="no", qid="holland"),
         {"out_of_scope"}),
        # counting questions are excluded from difference
        (make_question("How many touchdowns were scored by Dallas?",
                       "Dallas scored three touchdowns in the second half.", answer="3", qid="touchdowns"),
         {"out_of_scope"}),
        (make_question("How many more field goals did Vinatieri kick than Akers?",
                       "Vinatieri kicked 4 field goals and Akers kicked 2.", answer="2", qid="field-goals"),
         {"out_of_scope"}),
        (make_question("How many yards was the longest touchdown pass?",
                       "The longest touchdown pass covered 45 yards.", answer="45", qid="longest"),
         {"out_of_scope"}),
        (make_question("How many more people lived in the city than in the county?",
                       "The city had 12,000 residents and the county 9,500.", answer="2500", qid="more-than"),
         {"difference"}),
        (make_question("What is the difference between the two scores?",
                       "The scores were 17 and 24.", answer="7", qid="difference-word"), {"difference"}),
    ]
