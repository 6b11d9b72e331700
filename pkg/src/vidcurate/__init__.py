"""vidcurate: curation pipeline for consumer health-education videos.

Classifies videos on two axes (medical-information richness and
understandability) with two-view co-training plus human review of
high-confidence disagreements, then audits and constrains recommendations
for demographic representativeness.
"""

__version__ = "0.1.0"
