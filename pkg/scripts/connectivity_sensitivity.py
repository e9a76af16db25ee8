"""Compare 4- and 8-connected block grouping on a synthetic corpus."""
import argparse

from cardtext.config import PipelineConfig
from cardtext.evaluator import Confusion, GroundTruth, accuracy, match_ground_truth
from cardtext.pipeline import run_pipeline
from cardtext.synth import make_corpus


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cards = make_corpus(args.count, seed=args.seed)
    for connectivity in (4, 8):
        cfg = PipelineConfig(connectivity=connectivity)
        total, n_regions = Confusion(), 0
        for card in cards:
            result = run_pipeline(card.image, cfg)
            n_regions += len(result.regions)
            total = total + match_ground_truth(result.regions, GroundTruth("", card.text_boxes))
        print(
            f"connectivity={connectivity}: {n_regions} components, "
            f"BB={total.bb} BT={total.bt} TB={total.tb} TT={total.tt} "
            f"unmatched={total.unmatched_text} accuracy={100 * accuracy(total):.2f}%"
        )


if __name__ == "__main__":
    main()
