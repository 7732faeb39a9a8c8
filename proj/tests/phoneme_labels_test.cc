// tests/phoneme_labels_test.cc

// Copyright 2026 The ownvoice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "ownvoice/phoneme_labels.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ownvoice/error.h"
#include "test_util.h"

namespace ownvoice {
namespace {

LabelTrack Parse(const std::string& text, const PhonemeInventory& inventory,
                 std::size_t total) {
  std::istringstream in(text);
  return ParseLabelTrack(in, inventory, total);
}

PhonemeInventory SilAb() { return PhonemeInventory({"sil", "a", "b"}); }

TEST_CASE("gaps are filled with silence") {
  const auto inv = SilAb();
  const LabelTrack track = Parse("0\t1000\ta\n", inv, 1500);
  REQUIRE(track.spans.size() == 2);
  CHECK(track.spans[0] == LabelSpan{0, 1000, 1});
  CHECK(track.spans[1] == LabelSpan{1000, 1500, 0});
}

TEST_CASE("leading and interior gaps are filled") {
  const auto inv = SilAb();
  const LabelTrack track = Parse("# header\n100\t200\ta\n300\t400\tb\n", inv, 400);
  REQUIRE(track.spans.size() == 4);
  CHECK(track.spans[0] == LabelSpan{0, 100, 0});
  CHECK(track.spans[2] == LabelSpan{200, 300, 0});
  CHECK(track.spans[3] == LabelSpan{300, 400, 2});
}

TEST_CASE("empty file is one silence span") {
  const LabelTrack track = Parse("", SilAb(), 800);
  REQUIRE(track.spans.size() == 1);
  CHECK(track.spans[0] == LabelSpan{0, 800, 0});
}

TEST_CASE("malformed tracks are rejected") {
  const auto inv = SilAb();
  CHECK_THROWS_AS(Parse("0\t100\ta\n50\t150\tb\n", inv, 200), Error);
  CHECK_THROWS_AS(Parse("0\t100\tzz\n", inv, 200), Error);
  CHECK_THROWS_AS(Parse("100\t100\ta\n", inv, 200), Error);
  CHECK_THROWS_AS(Parse("0\t300\ta\n", inv, 200), Error);
  CHECK_THROWS_AS(Parse("0 x a\n", inv, 200), Error);
}

TEST_CASE("inventory needs a unique silence class") {
  CHECK_THROWS_AS(PhonemeInventory({"a", "b"}), Error);
  CHECK_THROWS_AS(PhonemeInventory({"sil", "a", "a"}), Error);
  const auto generic = PhonemeInventory::Generic();
  CHECK(generic.size() == 62);
  CHECK(generic.name(generic.silence_id()) == "sil");
}

TEST_CASE("inventory write and parse round trip") {
  const auto inv = PhonemeInventory::Generic(7);
  std::stringstream io;
  inv.Write(io);
  CHECK(PhonemeInventory::Parse(io).classes() == inv.classes());
}

TEST_CASE("single phoneme track labels every frame") {
  const FrameParams p = FrameParams::ForFrameLength(128, 5000.0);
  const LabelTrack track = Parse("0\t1000\ta\n", SilAb(), 1000);
  const FrameLabels labels = ToFrameLabels(track, p, NumFrames(1000, p));
  CHECK(labels.size() == NumFrames(1000, p));
  for (int l : labels) CHECK(l == 1);
}

TEST_CASE("majority vote inside a frame") {
  // K=4, hop=2; frame 1 covers samples [2, 6): {2} is a, {3, 4, 5} are b.
  const FrameParams p = FrameParams::ForFrameLength(4, 5000.0);
  const LabelTrack track = Parse("0\t3\ta\n3\t8\tb\n", SilAb(), 8);
  const FrameLabels labels = ToFrameLabels(track, p, NumFrames(8, p));
  REQUIRE(labels.size() == 4);
  CHECK(labels[0] == 1);
  CHECK(labels[1] == 2);
}

TEST_CASE("an even split goes to the earlier span") {
  // Frame 1 covers [2, 6): {2, 3} are a, {4, 5} are b.
  const FrameParams p = FrameParams::ForFrameLength(4, 5000.0);
  const LabelTrack track = Parse("0\t4\ta\n4\t8\tb\n", SilAb(), 8);
  const FrameLabels labels = ToFrameLabels(track, p, NumFrames(8, p));
  CHECK(labels[1] == 1);
  // Frame 3 covers [6, 10) but only [6, 8) is in the signal.
  CHECK(labels[3] == 2);
}

LabelTrack RandomTrack(std::mt19937_64& rng, int num_phonemes,
                       std::size_t total) {
  std::uniform_int_distribution<std::size_t> len(1, 300);
  std::uniform_int_distribution<int> ph(0, num_phonemes - 1);
  LabelTrack track;
  track.total_samples = total;
  for (std::size_t t = 0; t < total;) {
    const std::size_t end = std::min(total, t + len(rng));
    track.spans.push_back({t, end, ph(rng)});
    t = end;
  }
  return track;
}

TEST_CASE("projection is total and idempotent") {
  std::mt19937_64 rng(3);
  const FrameParams p = FrameParams::ForFrameLength(128, 5000.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t total = 1000 + 517 * trial;
    const LabelTrack track = RandomTrack(rng, 6, total);
    const FrameLabels labels = ToFrameLabels(track, p, NumFrames(total, p));
    CHECK(labels.size() == NumFrames(total, p));
    for (int l : labels) CHECK((l >= 0 && l < 6));
    const LabelTrack blocky = TrackFromFrameLabels(labels, p, total);
    CHECK(ToFrameLabels(blocky, p, labels.size()) == labels);
  }
}

TEST_CASE("permuting the inventory permutes frame labels") {
  std::mt19937_64 rng(4);
  const FrameParams p = FrameParams::ForFrameLength(128, 5000.0);
  const auto inv = PhonemeInventory::Generic(6);
  for (int trial = 0; trial < 10; ++trial) {
    const LabelTrack track = RandomTrack(rng, 6, 4000);
    std::stringstream text;
    WriteLabelTrack(text, track, inv);

    std::vector<std::string> shuffled = inv.classes();
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const PhonemeInventory permuted(shuffled);

    std::istringstream a(text.str()), b(text.str());
    const FrameLabels original =
        ToFrameLabels(ParseLabelTrack(a, inv, 4000), p, NumFrames(4000, p));
    const FrameLabels relabeled =
        ToFrameLabels(ParseLabelTrack(b, permuted, 4000), p, NumFrames(4000, p));
    REQUIRE(original.size() == relabeled.size());
    for (std::size_t l = 0; l < original.size(); ++l) {
      CHECK(relabeled[l] == *permuted.IndexOf(inv.name(original[l])));
    }
  }
}

TEST_CASE("frame count mismatch is rejected") {
  const FrameParams p = FrameParams::ForFrameLength(128, 5000.0);
  const LabelTrack track = Parse("", SilAb(), 1000);
  CHECK_THROWS_AS(ToFrameLabels(track, p, 3), Error);
}

}  // namespace
}  // namespace ownvoice
