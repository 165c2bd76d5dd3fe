from django.contrib import admin
from .models import CensusRun, CensusRecord


@admin.register(CensusRun)
class CensusRunAdmin(admin.ModelAdmin):
    """Admin interface for CensusRun model"""

    list_display = [
        'id',
        'tetrahedra',
        'mode',
        'status',
        'triangulation_count',
        'manifold_count',
        'review_count',
        'created_at',
    ]

    list_filter = [
        'mode',
        'status',
        'tetrahedra',
    ]

    readonly_fields = [
        'created_at',
        'updated_at',
    ]

    fieldsets = (
        ('Run', {
            'fields': (
                'tetrahedra',
                'mode',
                'require_non_orientable',
                'prune_low_degree_edges',
                'status',
            )
        }),
        ('Results', {
            'fields': (
                'triangulation_count',
                'manifold_count',
                'review_count',
                'archive_path',
            )
        }),
        ('Timestamps', {
            'fields': (
                'created_at',
                'updated_at',
            ),
            'classes': ('collapse',)
        }),
    )


@admin.register(CensusRecord)
class CensusRecordAdmin(admin.ModelAdmin):
    """Admin interface for CensusRecord model"""

    list_display = [
        'signature',
        'run',
        'status',
        'manifold_class',
        'family_names',
    ]

    list_filter = [
        'status',
        'run__tetrahedra',
    ]

    search_fields = [
        'signature',
        'family_names',
        'reason',
    ]

    readonly_fields = [
        'created_at',
    ]
