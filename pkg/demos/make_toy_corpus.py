"""Regenerate the bundled toy corpus (50 Meal-Master style recipes).

    python demos/make_toy_corpus.py src/factorspace/data/toy_recipes.mmf

Output is fully determined by the seed below.
"""

import random
import sys

SEED = 20140101

THEMES = {
    "dessert": (["sugar", "butter", "flour", "eggs", "vanilla", "chocolate", "cream",
                 "cocoa", "milk", "baking", "soda", "cinnamon", "pecans", "raisins"],
                ["Cake", "Brownies", "Cookies", "Pudding", "Pie", "Muffins"]),
    "soup": (["onion", "celery", "carrots", "broth", "garlic", "potatoes", "beans",
              "tomatoes", "thyme", "bay", "leek", "water", "salt", "pepper"],
             ["Soup", "Chowder", "Stew", "Bisque"]),
    "salad": (["lettuce", "vinegar", "olive", "oil", "mustard", "lemon", "juice",
               "cucumber", "parsley", "dressing", "salt", "pepper", "feta", "olives"],
              ["Salad", "Slaw", "Vinaigrette"]),
    "meat": (["chicken", "beef", "garlic", "soy", "sauce", "ginger", "onions", "oil",
              "pepper", "rice", "marinade", "broil", "steak", "paprika"],
             ["Roast", "Stir Fry", "Kabobs", "Casserole"]),
}

UNITS = ["c", "ts", "tb", "lb", "oz", "pk", "lg", "md"]
STEPS = ["Combine the {a} and {b} in a large bowl.",
         "Add {a}, stirring until well mixed.",
         "Heat the {a} over medium heat; add {b} and cook 5 minutes.",
         "Season with {a} and serve with {b}.",
         "Place the {a} in the pan and bake at 350 F until done.",
         "Whisk {a} into the {b} and chill."]


def recipe(rng: random.Random, n: int, theme: str) -> str:
    words, dishes = THEMES[theme]
    other = rng.choice([t for t in THEMES if t != theme])
    picks = rng.sample(words, 7) + rng.sample(THEMES[other][0], 1)
    title = f"{picks[0].title()} {rng.choice(dishes)} No.{n}"
    lines = [" ", f"      Title: {title}", f" Categories: {theme.title()}",
             f"      Yield: {rng.randint(2, 12)} servings", " "]
    for w in picks:
        qty = rng.choice(["1", "2", "1/2", "1/4", "3", "1 1/2"])
        lines.append(f"  {qty:>5} {rng.choice(UNITS):<2} {w.title()}")
    lines.append(" ")
    for _ in range(rng.randint(3, 6)):
        a, b = rng.sample(picks, 2)
        lines.append("  " + rng.choice(STEPS).format(a=a, b=b))
    if rng.random() < 0.2:
        lines.append("  \xa9 1997 Toy Kitchen Services.")
    lines.append(" ")
    lines.append("-----")
    return "\n".join(lines) + "\n"


def main(path: str) -> None:
    rng = random.Random(SEED)
    themes = sorted(THEMES)
    text = "".join(recipe(rng, i + 1, themes[i % len(themes)]) for i in range(50))
    with open(path, "wb") as fh:
        fh.write(text.encode("latin-1"))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "toy_recipes.mmf")
