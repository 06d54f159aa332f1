"""subgoal2d: language-conditioned 2D pick-and-place control via
diffusion-generated image subgoals and a goal-reaching diffusion policy."""

__version__ = "0.1.0"
