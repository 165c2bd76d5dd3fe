from django.db import models


class CensusRun(models.Model):
    """Model to store one census run over a single tetrahedron count"""

    class Mode(models.TextChoices):
        CONSERVATIVE = 'conservative', 'Conservative'
        AGGRESSIVE = 'aggressive', 'Aggressive'

    class Status(models.TextChoices):
        RUNNING = 'running', 'Running'
        COMPLETED = 'completed', 'Completed'
        FAILED = 'failed', 'Failed'

    tetrahedra = models.PositiveSmallIntegerField()
    mode = models.CharField(max_length=20, choices=Mode.choices, default=Mode.AGGRESSIVE)
    require_non_orientable = models.BooleanField(default=True)
    prune_low_degree_edges = models.BooleanField(default=True)
    status = models.CharField(max_length=20, choices=Status.choices, default=Status.RUNNING)

    # Results
    triangulation_count = models.IntegerField(default=0)
    manifold_count = models.IntegerField(default=0)
    review_count = models.IntegerField(default=0)
    archive_path = models.CharField(max_length=500, blank=True, default='')

    # Timestamps
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['tetrahedra', 'mode']),
            models.Index(fields=['-created_at']),
        ]

    def __str__(self):
        return f"n={self.tetrahedra} {self.mode} ({self.status})"


class CensusRecord(models.Model):
    """Model to store one triangulation found by a census run"""

    class Status(models.TextChoices):
        CENSUS = 'census', 'Census'
        REVIEW = 'review', 'Review'
        DROPPED = 'dropped', 'Dropped'

    run = models.ForeignKey(CensusRun, on_delete=models.CASCADE, related_name='records')
    signature = models.CharField(max_length=255, db_index=True)
    gluing_table = models.TextField()
    invariants = models.JSONField(blank=True, null=True)
    manifold_class = models.IntegerField(blank=True, null=True)
    family_names = models.CharField(max_length=500, blank=True, default='')
    status = models.CharField(max_length=20, choices=Status.choices, default=Status.CENSUS)
    reason = models.CharField(max_length=255, blank=True, default='')

    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['signature']
        constraints = [
            models.UniqueConstraint(fields=['run', 'signature'], name='unique_run_signature'),
        ]
        indexes = [
            models.Index(fields=['run', 'status']),
        ]

    def __str__(self):
        return f"{self.signature} ({self.status})"
