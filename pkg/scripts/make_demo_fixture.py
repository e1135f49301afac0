#!/usr/bin/env python3
"""Generate the bundled demo fixture: 3 videos, exactly 1,500 comments.

The corpus is authored so every dashboard surface has something to show:
distinct vocabulary families for topic clustering, lexicon-aligned wording
so the stub classifier scores as intended, a superfan above the 200-comment
threshold, a comment burst plus positive-sentiment swing on the flood video
(volume_high + sentiment_positive alerts), a stopped-commenting video
(volume_low), 20 replies, and 8 update-request comments.

Deterministic: rerunning produces byte-identical JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from datetime import datetime, timedelta, timezone

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from commentlens.sentiment import LexiconStubClassifier  # noqa: E402
from commentlens.alerts import UpdateRequestMatcher  # noqa: E402
from commentlens.config import data_file  # noqa: E402

UTC = timezone.utc
FETCHED_AT = "2024-02-01T00:00:00Z"
CHANNEL = {"channel_id": "UCdemo-riverbend-docs", "display_name": "Riverbend Documentaries"}

VIDEOS = [
    {"video_id": "vid-housing", "title": "The Housing Crunch: Who Owns the Block?",
     "published_at": "2023-01-15T17:00:00Z", "view_count": 412000, "like_count": 11800},
    {"video_id": "vid-opioid", "title": "Inside the Opioid Settlement Money",
     "published_at": "2023-06-10T16:00:00Z", "view_count": 298000, "like_count": 9400},
    {"video_id": "vid-flood", "title": "After the Flood: A Town Rebuilds",
     "published_at": "2023-10-05T15:00:00Z", "view_count": 175000, "like_count": 8100},
]

# template families: distinct core vocabulary so bag-of-words embeddings
# separate them; polarity buckets align with the stub lexicon
FAMILIES: dict[str, dict[str, list[str]]] = {
    "housing": {
        "pos": [
            "Excellent breakdown of how {city} zoning boards block affordable housing construction",
            "The eviction court footage was powerful, housing reporting like this matters",
            "Great interview with the tenants union organizer about rent stabilization in {city}",
            "Love that you traced the shell companies buying rental buildings, brilliant housing journalism",
        ],
        "neu": [
            "The segment about corporate landlords buying up {city} rentals around minute {minute} needs more context",
            "How many single family homes in {city} are owned by investment firms versus actual residents",
            "My rent went from {rent_a} to {rent_b} in two years, the numbers in this housing piece track",
            "The zoning map at {minute} minutes shows exactly which blocks got rezoned for apartments",
            "Did the city council ever vote on the affordable housing ordinance mentioned here",
        ],
        "neg": [
            "Terrible framing, you let the developer lobby off the hook on affordable housing",
            "This housing piece felt shallow, barely touched property tax assessments in {city}",
            "Disappointed the landlord association got the last word on rent control",
        ],
    },
    "opioid": {
        "pos": [
            "Outstanding accounting of where the opioid settlement money actually went in {county} county",
            "The pharmacist whistleblower interview was gripping, thank you for following the settlement dollars",
            "Brilliant reporting on how distributors dodged accountability for the opioid crisis",
        ],
        "neu": [
            "How much of the {amount} million settlement reached treatment programs in {county} county",
            "The county commissioners spent settlement funds on patrol cars, that part around {minute} minutes deserves a deeper audit",
            "Our clinic in {county} county still has a six week waitlist for medication assisted treatment",
            "Which states published itemized opioid settlement spending reports like the one shown here",
        ],
        "neg": [
            "Shameful that consultants skimmed the settlement, and this piece barely pressed them",
            "The segment on pharma executives felt toothless, disappointing accountability journalism",
        ],
    },
    "flood": {
        "pos": [
            "The drone shots of the rebuilt levee are beautiful, inspiring recovery story",
            "Wonderful profile of the volunteers mucking out flooded houses on {street} street",
            "This flood documentary captures the town's resilience, amazing work",
            "Grateful you showed the church group rebuilding flooded homes, moving stuff",
        ],
        "neu": [
            "What happened with the buyout offers for houses inside the floodplain on {street} street",
            "FEMA denied {pct} percent of claims here, matches what the film found",
            "The flood insurance section around {minute} minutes explains why premiums doubled",
            "Is the army corps levee study from the film public anywhere",
        ],
        "neg": [
            "Infuriating that the county approved floodplain construction again, wish the film pushed harder",
            "The insurance adjuster segment was bad, felt like a commercial",
        ],
    },
    "craft": {
        "pos": [
            "The cinematography this episode was stunning, masterful editing too",
            "Narrator's pacing is excellent, the score fits the archival footage beautifully",
            "Superb sound design, the ambient audio from the {place} scenes is incredible",
        ],
        "neu": [
            "Who composed the track that plays over the opening {place} montage",
            "The color grading shifts noticeably around the {minute} minute mark",
            "Subtitles drop out for a few seconds near minute {minute}",
        ],
        "neg": [
            "The reenactments are cringe and the narration felt lazy this time",
            "Awful audio mixing, interviews are way quieter than the music",
        ],
    },
    "personal": {
        "pos": [
            "I grew up on {street} street and this brought back memories, thank you for telling our story",
            "My mother worked at the {place} plant for years, grateful someone finally covered it",
        ],
        "neu": [
            "My cousin went through exactly this in {year}, sharing with the family",
            "I live two blocks from {street} street, the footage is accurate",
            "We moved away in {year} but the neighborhood in this film is still home",
        ],
        "neg": [
            "Hate how outsiders film our town for a week and think they understand it",
        ],
    },
    "policy": {
        "pos": [
            "Great that you pressed the state legislature on the funding formula",
            "The public records breakdown of federal aid was informative and thorough",
        ],
        "neu": [
            "Has the oversight committee responded to the findings in this report",
            "The federal grant program mentioned at {minute} minutes expired in {year}, worth a note",
            "Which agencies declined interviews for this one",
        ],
        "neg": [
            "The mayor's office spin went unchallenged, pathetic accountability coverage",
        ],
    },
}

UPDATE_REQUESTS = [
    "Please do an update on this story, so much has changed since it aired",
    "Where are they now? The family from the second half especially",
    "Can you make a part 2 covering the settlement appeals",
    "Can you do a follow up on the levee certification decision",
    "Any chance of an updated version with the new census numbers",
    "Please revisit this town in a year and film a follow up",
    "What happened to the council president after the recall, we need a sequel",
    "Hope you do a part two, please give us an update on the rebuilding",
]

FILLERS = {
    "city": ["Riverbend", "Edgewater", "Milton", "Harper Falls"],
    "county": ["Cassel", "Dunmore", "Avery", "Percy"],
    "street": ["Mulberry", "Canal", "Birch", "Foundry"],
    "place": ["riverfront", "mill", "courthouse", "depot"],
    "minute": ["12", "23", "31", "44", "58"],
    "rent_a": ["900", "1050", "1200"],
    "rent_b": ["1400", "1650", "1800"],
    "amount": ["26", "54", "110"],
    "pct": ["40", "55", "62"],
    "year": ["2011", "2016", "2019", "2021"],
}

# weekly comment counts per video; the channel horizon week is 2024-01-22
WEEK0 = {"vid-housing": "2023-01-09", "vid-opioid": "2023-06-05",
         "vid-flood": "2023-10-02"}
SCHEDULES = {
    # 52 active weeks then two silent ones: volume_low at the horizon
    "vid-housing": [15] * 7 + [14] * 37 + [12, 11, 10, 10, 9, 9, 8, 8, 0, 0],
    # steady through the horizon week: no volume alert
    "vid-opioid": [16] * 10 + [15] * 24,
    # steady history then a 70-comment burst in the horizon week:
    # volume_high + sentiment_positive
    "vid-flood": [13] * 14 + [14] * 2 + [70],
}

FAMILY_MIX = {
    "vid-housing": [("housing", 55), ("craft", 12), ("personal", 13),
                    ("policy", 12), ("opioid", 0), ("flood", 8)],
    "vid-opioid": [("opioid", 55), ("craft", 12), ("personal", 13),
                   ("policy", 14), ("housing", 0), ("flood", 6)],
    "vid-flood": [("flood", 55), ("craft", 20), ("personal", 17),
                  ("policy", 8), ("housing", 0), ("opioid", 0)],
}

POLARITY_MIX = {"pos": 38, "neu": 44, "neg": 18}
BURST_POLARITY = {"pos": 60, "neu": 9, "neg": 1}  # the flood finale week


def pick_weighted(rng: random.Random, pairs):
    total = sum(w for _, w in pairs)
    roll = rng.random() * total
    for value, weight in pairs:
        roll -= weight
        if roll <= 0:
            return value
    return pairs[-1][0]


def render(rng: random.Random, template: str) -> str:
    out = template
    for key, options in FILLERS.items():
        while "{" + key + "}" in out:
            out = out.replace("{" + key + "}", rng.choice(options), 1)
    return out


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=os.path.join(
        os.path.dirname(__file__), "..", "demo"))
    args = parser.parse_args()

    rng = random.Random(20240201)
    classifier = LexiconStubClassifier()
    scalar_of = {"pos": 1.0, "neu": 0.0, "neg": -1.0}

    comments = []
    counter = 0
    for video in VIDEOS:
        vid = video["video_id"]
        week0 = datetime.fromisoformat(WEEK0[vid]).replace(tzinfo=UTC)
        schedule = SCHEDULES[vid]
        is_flood = vid == "vid-flood"
        for week_index, count in enumerate(schedule):
            week_start = week0 + timedelta(days=7 * week_index)
            burst = is_flood and week_index == len(schedule) - 1
            polarity_mix = BURST_POLARITY if burst else POLARITY_MIX
            for _ in range(count):
                counter += 1
                family = pick_weighted(rng, FAMILY_MIX[vid])
                polarity = pick_weighted(rng, list(polarity_mix.items()))
                bucket = FAMILIES[family][polarity] or FAMILIES[family]["neu"]
                text = render(rng, rng.choice(bucket))
                when = week_start + timedelta(seconds=rng.randrange(7 * 86400))
                comments.append({
                    "comment_id": f"{vid}-c{counter:04d}",
                    "video_id": vid,
                    "parent_id": None,
                    "author_id": "",
                    "author_display": "",
                    "text": text,
                    "published_at": when.strftime("%Y-%m-%dT%H:%M:%SZ"),
                    "like_count": rng.randrange(0, 120),
                    "_polarity": polarity,
                })

    # swap eight flood-video comments for update requests (neutral wording)
    flood_slots = [c for c in comments if c["video_id"] == "vid-flood"][-40:]
    for request_text, slot in zip(UPDATE_REQUESTS, flood_slots[::5]):
        slot["text"] = request_text
        slot["_polarity"] = "neu"

    # authors: one clear superfan, one mixed near-threshold fan, then a pool
    pool = [(f"UCa{i:04d}", f"viewer_{i:04d}") for i in range(1, 121)]
    superfan_slots = [c for c in comments if c["_polarity"] == "pos"][:190] + \
        [c for c in comments if c["_polarity"] == "neu"][:30]
    for c in superfan_slots:
        c["author_id"], c["author_display"] = "UCfan0001", "DocsDevotee"
    second_slots = [c for c in comments if not c["author_id"]
                    and c["_polarity"] == "pos"][:100] + \
        [c for c in comments if not c["author_id"] and c["_polarity"] == "neu"][:80] + \
        [c for c in comments if not c["author_id"] and c["_polarity"] == "neg"][:25]
    for c in second_slots:
        c["author_id"], c["author_display"] = "UCfan0002", "ArchiveOwl"
    for c in comments:
        if not c["author_id"]:
            c["author_id"], c["author_display"] = rng.choice(pool)

    # 20 replies on the opioid video: attach to earlier comments there
    opioid = [c for c in comments if c["video_id"] == "vid-opioid"]
    reply_targets = opioid[10:50:2]
    replies = opioid[-20:]
    for parent, reply in zip(reply_targets, replies):
        reply["parent_id"] = parent["comment_id"]
        when = max(parent["published_at"], reply["published_at"])
        reply["published_at"] = when

    # self-check: stub classifier agrees with the intended polarity
    texts = [c["text"] for c in comments]
    triples = classifier.classify(texts)
    mism = 0
    for c, t in zip(comments, triples):
        got = {(0.0, 0.0, 1.0): "pos", (0.0, 1.0, 0.0): "neu",
               (1.0, 0.0, 0.0): "neg"}[t.as_tuple()]
        if got != c["_polarity"]:
            mism += 1
    assert mism == 0, f"{mism} comments scored against their intended polarity"

    matcher = UpdateRequestMatcher(data_file("update_request_patterns.json"))
    hits = [c for c in comments if matcher.matches(c["text"])]
    assert len(hits) == len(UPDATE_REQUESTS), \
        f"expected {len(UPDATE_REQUESTS)} update requests, matcher found {len(hits)}"
    assert all(c["video_id"] == "vid-flood" for c in hits)

    assert len(comments) == 1500, len(comments)
    horizon = max(c["published_at"] for c in comments)
    assert horizon.startswith("2024-01-2"), horizon

    for c in comments:
        del c["_polarity"]
    comments.sort(key=lambda c: (c["video_id"], c["published_at"], c["comment_id"]))

    videos_out = []
    for video in VIDEOS:
        vid_comments = [c for c in comments if c["video_id"] == video["video_id"]]
        videos_out.append({**video,
                           "channel_id": CHANNEL["channel_id"],
                           "comment_count_reported": len(vid_comments),
                           "fetched_at": FETCHED_AT})

    out_dir = os.path.abspath(args.out)
    os.makedirs(out_dir, exist_ok=True)
    for name, payload in (("channel.json", CHANNEL), ("videos.json", videos_out),
                          ("comments.json", comments)):
        with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
            json.dump(payload, fh, ensure_ascii=False, indent=1)
            fh.write("\n")
    per_video = {v["video_id"]: v["comment_count_reported"] for v in videos_out}
    print(f"wrote demo fixture to {out_dir}: {per_video} (total {len(comments)})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
