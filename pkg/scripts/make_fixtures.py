"""Regenerates the bundled replay fixtures.

Authors a ten-task dataset plus scripted LLM responses, records the
transcripts by running the real pipeline against a scripted provider, and
pins golden evaluation/oracle values. Rerun after changing prompt templates
or pipeline call structure:

    python scripts/make_fixtures.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from ssv import oracle
from ssv.dsl import parse_program
from ssv.harness import ablation_grid, compute_metrics, evaluate
from ssv.llm.gateway import LlmGateway, LlmRequest, Mode, TranscriptStore
from ssv.pipeline import SsvConfig
from ssv.solver import SolverBackend
from ssv.tasks import ReasoningTask, normalize_label, write_dataset

FIXTURES = ROOT / "src" / "ssv" / "fixtures"

# ---------------------------------------------------------------- tasks ---

def task(tid, context, question, options, gold):
    return ReasoningTask(
        id=tid, context=context, question=question,
        options=tuple((normalize_label(l), t) for l, t in options),
        gold=normalize_label(gold),
    )


TECHNICIANS_CONTEXT = (
    "In a repair facility there are exactly six technicians: Stacy, Urma, "
    "Wim, Xena, Yolanda, and Zane. Each technician repairs machines of at "
    "least one of the following three types - radios, televisions, and "
    "VCRs - and no other types. The following conditions apply: Xena and "
    "exactly three other technicians repair radios. Yolanda repairs both "
    "televisions and VCRs. Stacy does not repair any type of machine that "
    "Yolanda repairs. Zane repairs more types of machines than Yolanda "
    "repairs. Wim does not repair any type of machine that Stacy repairs. "
    "Urma repairs exactly two types of machines."
)

TASKS = [
    task("t01", TECHNICIANS_CONTEXT,
         "Which one of the following pairs of technicians could repair all "
         "and only the same types of machines as each other?",
         [("A", "Stacy and Urma"), ("B", "Urma and Yolanda"),
          ("C", "Urma and Xena"), ("D", "Wim and Xena"),
          ("E", "Xena and Yolanda")], "C"),
    task("t02",
         "Stella and Jay are creatures. Stella is a dumpus. Each dumpus is "
         "a vumpus. Vumpuses are bright.",
         "Is the following statement true or false? Stella is bright.",
         [("True", "True"), ("False", "False")], "True"),
    task("t03",
         "A signal shows exactly one of three colors: red, green, or blue. "
         "The signal is not red. The signal is not blue.",
         "Which color does the signal show?",
         [("A", "red"), ("B", "green"), ("C", "blue")], "B"),
    task("t04",
         "A box holds exactly one token: a coin or a gem. The box does not "
         "hold a gem.",
         "What does the box hold?",
         [("A", "a coin"), ("B", "a gem")], "A"),
    task("t05",
         "A light is red or blue. The light is not red.",
         "What color is the light?",
         [("A", "red"), ("B", "blue")], "B"),
    task("t06",
         "A card shows exactly one of the numbers 1, 2, or 3. The card does "
         "not show 3.",
         "Which number does the card show?",
         [("A", "1"), ("B", "2"), ("C", "3")], "A"),
    task("t07",
         "Lamp town has exactly three lamps: L1, L2, and L3. Every lamp is "
         "lit or dark. Exactly one lamp is lit. L1 and L2 are dark.",
         "Which lamp is lit?",
         [("A", "L1"), ("B", "L2"), ("C", "L3")], "C"),
    task("t08",
         "Pia and Quin each either attend or stay home. Exactly one of them "
         "attends. Pia does not attend.",
         "Whose absence is impossible?",
         [("A", "Pia"), ("B", "Quin")], "B"),
    task("t09",
         "A token is black or white. The token is black.",
         "What color is the token?",
         [("A", "black"), ("B", "white")], "A"),
    task("t10",
         "A switch is on or off. The switch is on.",
         "What position is the switch in?",
         [("A", "on"), ("B", "off")], "A"),
]

# ------------------------------------------------------------- programs ---

P01 = (FIXTURES / "technicians_exists.ssv").read_text(encoding="utf-8")

P02 = """#INIT: Stella and Jay are the creatures under discussion.
enum creatures { Stella, Jay }
fn is_dumpus(creatures) -> bool
fn is_vumpus(creatures) -> bool
fn is_bright(creatures) -> bool

#CONSTRAINT: Stella is a dumpus.
assert is_dumpus(Stella)

#CONSTRAINT: Each dumpus is a vumpus.
assert ForAll([c: creatures], Implies(is_dumpus(c), is_vumpus(c)))

#CONSTRAINT: Vumpuses are bright.
assert ForAll([c: creatures], Implies(is_vumpus(c), is_bright(c)))

#CHECKTYPE: valid the question asks whether the statement must be true

#OPTION A: Stella is bright in every admissible situation.
check is_bright(Stella)

#OPTION B: Stella fails to be bright in every admissible situation.
check Not(is_bright(Stella))
"""

P03 = """#INIT: A signal shows exactly one of three colors: red, green, or blue.
enum signal_colors { red, green, blue }
const shown: signal_colors

#CONSTRAINT: The signal is not red.
assert shown != red

#CONSTRAINT: The signal is not blue.
assert shown != blue

#CHECKTYPE: sat the question asks which color the signal shows

#OPTION A: The signal shows red.
check shown == red

#OPTION B: The signal shows green.
check shown == green

#OPTION C: The signal shows blue.
check shown == blue
"""

P04 = """#INIT: A box holds exactly one token: a coin or a gem.
enum items { coin, gem }
const held: items

#CONSTRAINT: The box does not hold a gem.
assert held != gem

#CHECKTYPE: sat the question asks what the box holds

#OPTION A: The box holds a coin.
check held == coin

#OPTION B: The box holds a gem.
check held == gem
"""

P06 = """#INIT: A card shows exactly one of the numbers 1, 2, or 3.
enum card_numbers { one, two, three }
const card: card_numbers

#CONSTRAINT: The card does not show 3.
assert card != three

#CHECKTYPE: sat the question asks which number the card shows

#OPTION A: The card shows 1.
check card == one

#OPTION B: The card shows 2.
check card == two

#OPTION C: The card shows 3.
check card == three
"""

P07 = """#INIT: Lamp town has exactly three lamps: L1, L2, and L3.
enum lamps { L1, L2, L3 }
fn lit(lamps) -> bool

#CONSTRAINT: Every lamp is lit or dark.
assert ForAll([l: lamps], Or(lit(l), Not(lit(l))))

#CONSTRAINT: Exactly one lamp is lit.
assert Sum([lit(l) for l in lamps]) == 1

#CONSTRAINT: L1 and L2 are dark.
assert And(Not(lit(L1)), Not(lit(L2)))

#CHECKTYPE: sat the question asks which lamp is lit

#OPTION A: L1 is lit.
check lit(L1)

#OPTION B: L2 is lit.
check lit(L2)

#OPTION C: L3 is lit.
check lit(L3)
"""

P08 = """#INIT: Pia and Quin each either attend or stay home.
enum people { Pia, Quin }
fn attends(people) -> bool

#CONSTRAINT: Exactly one of them attends.
assert Sum([attends(p) for p in people]) == 1

#CONSTRAINT: Pia does not attend.
assert Not(attends(Pia))

#CHECKTYPE: unsat the question asks whose absence is impossible

#OPTION A: Pia is absent.
check Not(attends(Pia))

#OPTION B: Quin is absent.
check Not(attends(Quin))
"""

P09 = """#INIT: A token is black or white.
enum token_colors { black, white }
const token: token_colors

#CONSTRAINT: The token is black.
assert token == white

#CHECKTYPE: sat the question asks what color the token is

#OPTION A: The token is black.
check token == black

#OPTION B: The token is white.
check token == white
"""

P10 = """#INIT: A switch is on or off.
enum switch_states { on, off }
const switch_state: switch_states

#CONSTRAINT: The switch is on.
assert switch_state == on

#CHECKTYPE: sat the question asks for the switch position

#OPTION A: The switch is on.
check switch_state == on

#OPTION B: The switch is off.
check switch_state == off
"""

# ------------------------------------------------- scripted LLM answers ---

INSTS_T01 = """Constraint:
Xena and exactly three other technicians repair radios.
PositiveExampleDescription:
Only Xena, Wim, Yolanda, and Zane repair radios and no one else.
PositiveExampleCode:
And(repairs(Stacy, radios) == False, repairs(Urma, radios) == False, repairs(Wim, radios) == True, repairs(Xena, radios) == True, repairs(Yolanda, radios) == True, repairs(Zane, radios) == True)
NegativeExampleDescription:
Only Xena and Yolanda repair radios and no one else.
NegativeExampleCode:
And(repairs(Stacy, radios) == False, repairs(Urma, radios) == False, repairs(Wim, radios) == False, repairs(Xena, radios) == True, repairs(Yolanda, radios) == True, repairs(Zane, radios) == False)
Constraint:
Yolanda repairs both televisions and VCRs.
PositiveExampleDescription:
Yolanda repairs televisions and VCRs.
PositiveExampleCode:
And(repairs(Yolanda, televisions) == True, repairs(Yolanda, VCRs) == True)
NegativeExampleDescription:
Yolanda does not repair televisions.
NegativeExampleCode:
repairs(Yolanda, televisions) == False
Constraint:
Stacy does not repair any type of machine that Yolanda repairs.
PositiveExampleDescription:
Stacy repairs radios while Yolanda repairs televisions.
PositiveExampleCode:
And(repairs(Stacy, radios) == True, repairs(Yolanda, televisions) == True, repairs(Stacy, televisions) == False)
NegativeExampleDescription:
Stacy and Yolanda both repair televisions.
NegativeExampleCode:
And(repairs(Stacy, televisions) == True, repairs(Yolanda, televisions) == True)
Constraint:
Zane repairs more types of machines than Yolanda repairs.
PositiveExampleDescription:
Zane repairs all three types while Yolanda repairs only televisions.
PositiveExampleCode:
And(repairs(Zane, radios) == True, repairs(Zane, televisions) == True, repairs(Zane, VCRs) == True, repairs(Yolanda, televisions) == True, repairs(Yolanda, radios) == False, repairs(Yolanda, VCRs) == False)
NegativeExampleDescription:
Zane repairs only radios while Yolanda repairs televisions.
NegativeExampleCode:
And(repairs(Zane, radios) == True, repairs(Zane, televisions) == False, repairs(Zane, VCRs) == False, repairs(Yolanda, televisions) == True)
Constraint:
Wim does not repair any type of machine that Stacy repairs.
PositiveExampleDescription:
Stacy repairs radios while Wim repairs televisions only.
PositiveExampleCode:
And(repairs(Stacy, radios) == True, repairs(Wim, radios) == False, repairs(Wim, televisions) == True)
NegativeExampleDescription:
Stacy and Wim both repair radios.
NegativeExampleCode:
And(repairs(Stacy, radios) == True, repairs(Wim, radios) == True)
Constraint:
Urma repairs exactly two types of machines.
PositiveExampleDescription:
Urma repairs radios and televisions but not VCRs.
PositiveExampleCode:
And(repairs(Urma, radios) == True, repairs(Urma, televisions) == True, repairs(Urma, VCRs) == False)
NegativeExampleDescription:
Urma repairs all three types of machines.
NegativeExampleCode:
And(repairs(Urma, radios) == True, repairs(Urma, televisions) == True, repairs(Urma, VCRs) == True)
"""

REPAIR_T01 = """ProblemDiscussion:
The scenario sets up six technicians and three machine types with the repairs function. The constraint requires that Stacy and Yolanda share no machine type. The constraint code only asserts that there exists some machine type that the two do not both repair, which still allows them to share another type, as the failing negative example shows: both repairing televisions remains satisfiable. The initial code and the example are correct; the constraint code must assert the condition for all machine types using the ForAll quantifier.
RepairedInitialCode:
NONE
RepairedConstraintCode:
assert ForAll([m: machines], Not(And(repairs(Stacy, m), repairs(Yolanda, m))))
RepairedNegativeExampleCode:
NONE
"""

INSTS_T02 = """Constraint:
Stella is a dumpus.
PositiveExampleDescription:
Stella is a dumpus.
PositiveExampleCode:
is_dumpus(Stella) == True
NegativeExampleDescription:
Stella is not a dumpus.
NegativeExampleCode:
is_dumpus(Stella) == False
Constraint:
Each dumpus is a vumpus.
PositiveExampleDescription:
Stella is a dumpus and is also a vumpus.
PositiveExampleCode:
And(is_dumpus(Stella) == True, is_vumpus(Stella) == True)
NegativeExampleDescription:
Stella is a dumpus but is not a vumpus.
NegativeExampleCode:
And(is_dumpus(Stella) == True, is_vumpus(Stella) == False)
Constraint:
Vumpuses are bright.
PositiveExampleDescription:
Jay is a vumpus and is bright.
PositiveExampleCode:
And(is_vumpus(Jay) == True, is_bright(Jay) == True)
NegativeExampleDescription:
Jay is a vumpus and is not bright.
NegativeExampleCode:
And(is_vumpus(Jay) == True, is_bright(Jay) == False)
"""

INSTS_T03 = """Constraint:
The signal is not red.
PositiveExampleDescription:
The signal shows blue.
PositiveExampleCode:
shown == blue
NegativeExampleDescription:
The signal shows green.
NegativeExampleCode:
shown == green
Constraint:
The signal is not blue.
PositiveExampleDescription:
The signal shows green.
PositiveExampleCode:
shown == green
NegativeExampleDescription:
The signal shows blue.
NegativeExampleCode:
shown == blue
"""

REPAIR_NONE_NEG = """ProblemDiscussion:
The example and the code appear mutually consistent and no repair suggests itself.
RepairedInitialCode:
NONE
RepairedConstraintCode:
NONE
RepairedNegativeExampleCode:
NONE
"""

REPAIR_NONE_POS = """ProblemDiscussion:
The example and the code appear mutually consistent and no repair suggests itself.
RepairedInitialCode:
NONE
RepairedConstraintCode:
NONE
RepairedPositiveExampleCode:
NONE
"""

INSTS_T04 = """Constraint:
The box does not hold a gem.
PositiveExampleDescription:
The box holds a coin.
PositiveExampleCode:
held == coin
NegativeExampleDescription:
The box holds a gem.
NegativeExampleCode:
held == gem
"""

INSTS_T06 = """Constraint:
The card does not show 3.
PositiveExampleDescription:
The card shows 1.
PositiveExampleCode:
card == one
NegativeExampleDescription:
The card shows 3.
NegativeExampleCode:
card == three
"""

INSTS_T07 = """Constraint:
Every lamp is lit or dark.
PositiveExampleDescription:
L1 is lit.
PositiveExampleCode:
lit(L1) == True
NegativeExampleDescription:
NONE
NegativeExampleCode:
pass
Constraint:
Exactly one lamp is lit.
PositiveExampleDescription:
Only L1 is lit.
PositiveExampleCode:
And(lit(L1) == True, lit(L2) == False, lit(L3) == False)
NegativeExampleDescription:
Both L1 and L2 are lit.
NegativeExampleCode:
And(lit(L1) == True, lit(L2) == True)
Constraint:
L1 and L2 are dark.
PositiveExampleDescription:
L1 and L2 are both dark.
PositiveExampleCode:
And(lit(L1) == False, lit(L2) == False)
NegativeExampleDescription:
L1 is lit.
NegativeExampleCode:
lit(L1) == True
"""

INSTS_T08 = """Constraint:
Exactly one of them attends.
PositiveExampleDescription:
Pia attends and Quin stays home.
PositiveExampleCode:
And(attends(Pia) == True, attends(Quin) == False)
NegativeExampleDescription:
Both Pia and Quin attend.
NegativeExampleCode:
And(attends(Pia) == True, attends(Quin) == True)
Constraint:
Pia does not attend.
PositiveExampleDescription:
Pia stays home.
PositiveExampleCode:
attends(Pia) == False
NegativeExampleDescription:
Pia attends.
NegativeExampleCode:
attends(Pia) == True
"""

INSTS_T09 = """Constraint:
The token is black.
PositiveExampleDescription:
The token is black.
PositiveExampleCode:
token == black
NegativeExampleDescription:
The token is white.
NegativeExampleCode:
token == white
"""

REPAIR_T09 = """ProblemDiscussion:
The constraint states the token is black and the code asserts a color for the token, which looks consistent with the scenario, so the constraint code is restated unchanged.
RepairedInitialCode:
NONE
RepairedConstraintCode:
assert token == white
RepairedPositiveExampleCode:
NONE
"""


def scripted_response(kind: str, prompt: str, temperature: float) -> str:
    tail = prompt[prompt.rfind("------"):]
    if kind == "direct_program":
        if temperature == 0.0:
            for marker, program in [
                ("repair facility", P01), ("Stella and Jay", P02),
                ("A signal shows", P03), ("A card shows", P06),
                ("Lamp town", P07), ("Pia and Quin", P08),
                ("A token is black or white", P09), ("A switch is on or off", P10),
            ]:
                if marker in tail:
                    return program
        if temperature == 0.3 and "A box holds exactly one token" in tail:
            return P04
        return "NO PROGRAM AVAILABLE."
    if kind == "instantiations":
        for marker, response in [
            ("repair facility", INSTS_T01), ("Stella and Jay", INSTS_T02),
            ("A signal shows", INSTS_T03),
            ("A box holds exactly one token", INSTS_T04),
            ("A card shows", INSTS_T06), ("Lamp town", INSTS_T07),
            ("Pia and Quin", INSTS_T08),
            ("A token is black or white", INSTS_T09),
        ]:
            if marker in tail:
                return response
        return "NO EXAMPLES."  # t10 and anything unmatched: empty suite
    if kind == "semantic_repair":
        if "Stacy does not repair any type of machine" in tail:
            return REPAIR_T01
        if "The token is black" in tail:
            return REPAIR_T09
        if "NegativeExampleCode:" in tail:
            return REPAIR_NONE_NEG
        return REPAIR_NONE_POS
    if kind == "cot_fallback":
        for marker, letter in [
            ("repair facility", "A"), ("A box holds exactly one token", "B"),
            ("A light is red or blue", "B"), ("A card shows", "B"),
        ]:
            if marker in tail:
                return f"Working through the conditions step by step.\nAnswer: ({letter})"
        return "I cannot tell."
    if kind == "error_refine":
        return "The program is not recoverable."
    if kind == "decompose":
        return "NO DECOMPOSITION."
    return "NOTHING."


class ScriptedGateway(LlmGateway):
    """Record-mode gateway that answers from the script instead of HTTP."""

    def _call_provider(self, request: LlmRequest) -> str:
        return scripted_response(request.kind.value, request.prompt,
                                 request.temperature)


# ------------------------------------------------------------- fixtures ---

def pigeonhole_program(pigeons: int = 13, holes: int = 12) -> str:
    names_p = ", ".join(f"p{i:02d}" for i in range(1, pigeons + 1))
    names_h = ", ".join(f"h{i:02d}" for i in range(1, holes + 1))
    return (
        f"#INIT: {pigeons} pigeons must each roost in one of {holes} holes.\n"
        f"enum pigeons {{ {names_p} }}\n"
        f"enum holes {{ {names_h} }}\n"
        f"fn roost(pigeons) -> holes\n\n"
        f"#CONSTRAINT: No two pigeons share a hole.\n"
        f"assert Distinct([roost(p) for p in pigeons])\n\n"
        f"#CHECKTYPE: sat whether a placement exists\n\n"
        f"#OPTION A: Every pigeon has its own hole.\n"
        f"check True\n\n"
        f"#OPTION B: Some pigeon lacks a hole of its own.\n"
        f"check False\n"
    )


def fig4_instantiations() -> list[dict]:
    pos_code = ("And(repairs(Stacy, radios) == True, "
                "repairs(Yolanda, televisions) == True, "
                "repairs(Stacy, televisions) == False)")
    neg_code = ("And(repairs(Stacy, televisions) == True, "
                "repairs(Yolanda, televisions) == True)")
    return [
        {"constraint_index": 2, "polarity": "positive",
         "description": "Stacy repairs radios while Yolanda repairs televisions.",
         "code": pos_code},
        {"constraint_index": 2, "polarity": "negative",
         "description": "Stacy and Yolanda both repair televisions.",
         "code": neg_code},
    ]


MEALS = """#INIT: On Tuesday Vladimir and Wendy each eat exactly four separate meals: breakfast, lunch, dinner, and a snack.
enum people { Vladimir, Wendy }
enum meals { breakfast, lunch, dinner, snack }
enum foods { fish, hot_cakes, macaroni, omelet, poached_eggs }
fn eats(people, meals) -> foods

#CONSTRAINT: At no meal does Vladimir eat the same kind of food as Wendy.
assert ForAll([m: meals], eats(Vladimir, m) != eats(Wendy, m))

#CONSTRAINT: Neither of them eats the same kind of food more than once during the day.
assert ForAll([p: people, f: foods], Sum([eats(p, m) == f for m in meals]) <= 1)

#CONSTRAINT: For breakfast, each eats exactly one of the following: hot cakes, poached eggs, or omelet.
assert ForAll([p: people], Or(eats(p, breakfast) == hot_cakes, eats(p, breakfast) == poached_eggs, eats(p, breakfast) == omelet))

#CONSTRAINT: For lunch, each eats exactly one of the following: fish, hot cakes, macaroni, or omelet.
assert ForAll([p: people], Or(eats(p, lunch) == fish, eats(p, lunch) == hot_cakes, eats(p, lunch) == macaroni, eats(p, lunch) == omelet))

#CONSTRAINT: For dinner, each eats exactly one of the following: fish, hot cakes, macaroni, or omelet.
assert ForAll([p: people], Or(eats(p, dinner) == fish, eats(p, dinner) == hot_cakes, eats(p, dinner) == macaroni, eats(p, dinner) == omelet))

#CONSTRAINT: For a snack, each eats exactly one of the following: fish or omelet.
assert ForAll([p: people], Or(eats(p, snack) == fish, eats(p, snack) == omelet))

#CONSTRAINT: Wendy eats an omelet for lunch.
assert eats(Wendy, lunch) == omelet

#CHECKTYPE: valid the question says "cannot", so the answer holds in every model

#OPTION A: Vladimir cannot eat fish.
check ForAll([m: meals], eats(Vladimir, m) != fish)

#OPTION B: Vladimir cannot eat hot cakes.
check ForAll([m: meals], eats(Vladimir, m) != hot_cakes)

#OPTION C: Vladimir cannot eat macaroni.
check ForAll([m: meals], eats(Vladimir, m) != macaroni)

#OPTION D: Vladimir cannot eat omelet.
check ForAll([m: meals], eats(Vladimir, m) != omelet)

#OPTION E: Vladimir cannot eat poached eggs.
check ForAll([m: meals], eats(Vladimir, m) != poached_eggs)
"""


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    write_dataset(TASKS, FIXTURES / "dataset.jsonl",
                  header={"schema": "ssv-task/1"})
    (FIXTURES / "pigeonhole.ssv").write_text(pigeonhole_program(),
                                             encoding="utf-8")
    (FIXTURES / "meals.ssv").write_text(MEALS, encoding="utf-8")
    (FIXTURES / "fig4_instantiations.json").write_text(
        json.dumps(fig4_instantiations(), indent=1) + "\n", encoding="utf-8")

    config = SsvConfig(
        temperatures=(0.0, 0.3, 0.4, 0.5),
        max_repairs=2,
        max_error_refines=1,
        model="scripted-llm",
        provider="replay",
    )
    (FIXTURES / "config.json").write_text(
        json.dumps(config.to_obj(), indent=1, sort_keys=True) + "\n",
        encoding="utf-8")

    # record transcripts by running the grid against the scripted provider
    transcripts = FIXTURES / "transcripts.json"
    if transcripts.exists():
        transcripts.unlink()
    store = TranscriptStore(transcripts)
    recorder = ScriptedGateway(mode=Mode.RECORD, store=store,
                               endpoint="scripted://local")
    grid = {"max_repairs": [0, 2],
            "temperature_prefixes": [[0.0], [0.0, 0.3, 0.4, 0.5]]}
    with SolverBackend() as backend:
        ablation_grid(TASKS, config, grid, gateway=recorder, backend=backend)
    print(f"recorded {len(store)} transcripts")

    # golden evaluation from a clean replay run
    replay = LlmGateway(mode=Mode.REPLAY, store=TranscriptStore(transcripts))
    with SolverBackend() as backend:
        records, metrics = evaluate(TASKS, config, gateway=replay,
                                    backend=backend, parallelism=1)
    golden = {
        "records": [r.to_obj() for r in records],
        "metrics": metrics.to_obj(),
    }
    (FIXTURES / "golden_report.json").write_text(
        json.dumps(golden, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    for record in records:
        print(f"  {record.task_id}: answer={record.answer} verified={record.verified} "
              f"correct={record.correct} fallback={record.used_fallback}")
    print("metrics:", metrics.display())

    # golden oracle values
    tech = parse_program((FIXTURES / "technicians.ssv").read_text())
    tech_cons = [e for c in tech.constraints for e in c.exprs]
    exists = parse_program((FIXTURES / "technicians_exists.ssv").read_text())
    exists_cons = [e for c in exists.constraints for e in c.exprs]
    meals = parse_program(MEALS)
    meals_cons = [e for c in meals.constraints for e in c.exprs]
    from ssv.dsl.ast import Exists as ExistsNode, Binder
    from ssv.dsl import parse_expr
    from ssv.dsl.ast import scope_of_init

    meals_scope = scope_of_init(meals.init)
    eats_pe = parse_expr(
        "Exists([m: meals], eats(Vladimir, m) == poached_eggs)", meals_scope)
    goldens = {
        "technicians_states": oracle.state_count(tech.init),
        "technicians_models": oracle.count_models(tech.init, tech_cons),
        "technicians_options": {
            o.label.value: oracle.oracle_check(
                tech.init, tech_cons + [o.check_expr]).value
            for o in tech.options
        },
        "technicians_exists_options": {
            o.label.value: oracle.oracle_check(
                exists.init, exists_cons + [o.check_expr]).value
            for o in exists.options
        },
        "meals_models": oracle.count_models(meals.init, meals_cons),
        "meals_vladimir_can_eat_poached_eggs": oracle.oracle_check(
            meals.init, meals_cons + [eats_pe]).value,
    }
    (FIXTURES / "golden_counts.json").write_text(
        json.dumps(goldens, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    print("goldens:", goldens)


if __name__ == "__main__":
    main()
