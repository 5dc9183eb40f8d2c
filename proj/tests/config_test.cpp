// Copyright 2026 The svrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "svrl/config.hpp"
#include "svrl/errors.hpp"

namespace svrl {
namespace {

TEST(KeyValue, SectionsCommentsAndOverrides) {
  KeyValueConfig kv;
  kv.load_text(R"(
# desk run
seed_note = ignored?   # trailing comment
[ppo]
gamma = 0.9
n_steps=32
[world]
n_obstacles = 0
)");
  EXPECT_EQ(kv.get("ppo.gamma"), "0.9");
  EXPECT_EQ(kv.get("ppo.n_steps"), "32");
  EXPECT_EQ(kv.get("world.n_obstacles"), "0");
  EXPECT_EQ(kv.get("seed_note"), "ignored?");
  kv.set("ppo.gamma", "0.95");
  EXPECT_EQ(kv.get("ppo.gamma"), "0.95");
  EXPECT_THROW(kv.get("ppo.missing"), ConfigError);
  EXPECT_THROW(kv.load_text("[broken\n"), ConfigError);
  EXPECT_THROW(kv.load_text("no equals sign\n"), ConfigError);
}

TEST(KeyValue, LaterFilesWin) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "svrl_cfg_a.cfg", b = dir / "svrl_cfg_b.cfg";
  std::ofstream(a) << "[ppo]\ngamma = 0.9\nseed = 4\n";
  std::ofstream(b) << "ppo.gamma = 0.7\n";
  KeyValueConfig kv;
  kv.load_file(a.string());
  kv.load_file(b.string());
  const RunConfig c = resolve_run_config(kv);
  EXPECT_EQ(c.ppo.gamma, 0.7);
  EXPECT_EQ(c.ppo.seed, 4u);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
  EXPECT_THROW(kv.load_file((dir / "svrl_missing.cfg").string()), ConfigError);
}

TEST(Resolve, DefaultsAreDeskScale) {
  const RunConfig c = resolve_run_config({});
  EXPECT_EQ(c.env.camera.width, 48);
  EXPECT_EQ(c.env.camera.height, 27);
  EXPECT_EQ(c.env.obs.mode, ObsMode::Segmented);
  EXPECT_EQ(c.net.kind, NetKind::Cnn);
  EXPECT_EQ(c.ppo.total_timesteps, 200000);
  EXPECT_EQ(c.eval.trials, 30);
  EXPECT_FALSE(c.eval.stochastic);
  EXPECT_FALSE(c.log_wallclock);
}

TEST(Resolve, TypedValuesAndNetworkFollowsObservation) {
  KeyValueConfig kv;
  kv.set("obs.width", "24");
  kv.set("obs.height", "14");
  kv.set("camera.width", "96");
  kv.set("camera.height", "54");
  kv.set("obs.mode", "raw");
  kv.set("net.kind", "cnn-lstm");
  kv.set("ppo.total_timesteps", "2e5");
  kv.set("eval.stochastic", "yes");
  const RunConfig c = resolve_run_config(kv);
  EXPECT_EQ(c.net.obs_width, 24);
  EXPECT_EQ(c.net.obs_height, 14);
  EXPECT_EQ(c.env.obs.mode, ObsMode::Raw);
  EXPECT_EQ(c.net.kind, NetKind::CnnLstm);
  EXPECT_EQ(c.ppo.total_timesteps, 200000);
  EXPECT_TRUE(c.eval.stochastic);
}

TEST(Resolve, RejectsUnknownKeysAndBadValues) {
  auto bad = [](const char* key, const char* value) {
    KeyValueConfig kv;
    kv.set(key, value);
    EXPECT_THROW(resolve_run_config(kv), ConfigError) << key << "=" << value;
  };
  bad("ppo.gama", "0.9");
  bad("ppo.gamma", "high");
  bad("ppo.gamma", "1.5");
  bad("ppo.n_steps", "3.5");
  bad("obs.mode", "depth");
  bad("net.kind", "rnn");
  bad("eval.stochastic", "maybe");
  bad("camera.near_clip", "30");
  bad("obs.width", "96");  // larger than the camera
  bad("eval.trials", "0");
}

TEST(Resolve, DumpRoundTrips) {
  KeyValueConfig kv;
  kv.set("world.v_max", "0.1");
  kv.set("reward.c_timeout", "7.25");
  kv.set("net.kind", "mlp");
  const RunConfig c = resolve_run_config(kv);
  KeyValueConfig again;
  again.load_text(dump_run_config(c));
  const RunConfig d = resolve_run_config(again);
  EXPECT_EQ(dump_run_config(d), dump_run_config(c));
  EXPECT_EQ(d.env.world, c.env.world);
  EXPECT_EQ(d.net, c.net);
  EXPECT_EQ(d.ppo, c.ppo);
  EXPECT_EQ(run_config_keys().size(), again.values().size());
}

}  // namespace
}  // namespace svrl
