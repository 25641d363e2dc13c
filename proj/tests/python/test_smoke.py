# Copyright 2026 The hbench Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math

import numpy as np
import pytest

import hbench


def test_task_names():
    names = hbench.task_names()
    assert len(names) == 31
    assert {"walk", "push", "cabinet", "basketball"} <= set(names)


def test_tolerance():
    assert hbench.tolerance(0.5, 0.0, 1.0) == 1.0
    assert hbench.tolerance(2.0, 0.0, 1.0, margin=1.0) == pytest.approx(0.1)
    assert hbench.tolerance(2.0, 0.0, 1.0, margin=1.0, sigmoid="linear") == pytest.approx(0.1)
    assert hbench.tolerance(1.5, 0.0, 1.0) == 0.0
    with pytest.raises(hbench.HbenchError):
        hbench.tolerance(math.nan, 0.0, 1.0)


def test_environment_shapes_and_manifest():
    env = hbench.Environment("walk")
    obs = env.reset(seed=0)
    assert obs.shape == (env.observation_dim,)
    assert env.action_dim == 61
    manifest = json.loads(env.manifest())
    assert manifest["task"] == "walk"
    assert manifest["obs_dim"] == env.observation_dim
    obs, reward, done, info = env.step(np.zeros(env.action_dim))
    assert obs.shape == (env.observation_dim,)
    assert np.isfinite(reward)
    assert reward == pytest.approx(info["dense"] + info["sparse"])
    assert "stand" in info["terms"]
    assert isinstance(done, bool)


def test_environment_is_deterministic():
    def run():
        env = hbench.Environment("basketball")
        env.reset(seed=4)
        rng = np.random.default_rng(0)
        out = []
        for _ in range(100):
            obs, reward, done, _ = env.step(rng.uniform(-1, 1, env.action_dim))
            out.append((obs.copy(), reward))
            if done:
                env.reset(seed=5)
        return out

    for (oa, ra), (ob, rb) in zip(run(), run()):
        assert ra == rb
        np.testing.assert_array_equal(oa, ob)


def test_environment_errors():
    with pytest.raises(hbench.HbenchError, match="nope"):
        hbench.Environment("nope")
    env = hbench.Environment("walk")
    env.reset()
    with pytest.raises(hbench.HbenchError):
        env.step(np.zeros(3))
    with pytest.raises(hbench.HbenchError):
        hbench.Environment("walk", backend="bullet")


def test_env_pool_seeds_and_auto_reset():
    pool = hbench.EnvPool("walk", num_envs=3, num_threads=2)
    obs = pool.reset(seed=10)
    assert obs.shape == (3, pool.observation_dim)
    np.testing.assert_array_equal(obs[1], hbench.Environment("walk").reset(seed=11))
    actions = np.zeros((3, pool.action_dim))
    for _ in range(1000):
        obs, rewards, dones, infos = pool.step(actions)
        assert rewards.shape == (3,)
        if dones.any():
            i = int(np.flatnonzero(dones)[0])
            assert infos[i]["terminal_observation"].shape == (pool.observation_dim,)
            assert pool.episode_seed(i) == 10 + i + 3
            break
    else:
        pytest.fail("no episode ended within the cap")


def test_served_matches_direct():
    server = hbench.Server("walk", num_envs=2, seed=7, max_connections=1)
    try:
        with hbench.Client("127.0.0.1", server.port) as client:
            spec = client.hello()
            assert spec["obs_dim"] == 151
            assert spec["action_dim"] == 61
            assert json.loads(spec["manifest"])["obs_dim"] == 151
            first = client.reset(7)
            pool = hbench.EnvPool("walk", num_envs=2)
            np.testing.assert_array_equal(
                first["observations"], pool.reset(7).astype(np.float32))
            rng = np.random.default_rng(1)
            for _ in range(50):
                a = rng.uniform(-1, 1, (2, 61)).astype(np.float32)
                served = client.step(a)
                obs, rewards, _, _ = pool.step(a.astype(np.float64))
                np.testing.assert_array_equal(served["rewards"], rewards)
                np.testing.assert_array_equal(served["observations"], obs.astype(np.float32))
    finally:
        server.close()
