"""
Admin para corridas de benchmark
"""
from django.contrib import admin

from .models import BenchmarkRun


@admin.register(BenchmarkRun)
class BenchmarkRunAdmin(admin.ModelAdmin):
    """Admin para corridas de benchmark"""

    list_display = [
        'scenario', 'planner', 'run', 'seed',
        'satisfied', 'sound', 'best_cost', 'states', 'created_at'
    ]
    list_filter = ['scenario', 'planner', 'satisfied', 'deterministic', 'created_at']
    search_fields = ['scenario']
    readonly_fields = ['id', 'created_at', 'series']

    fieldsets = (
        ('Corrida', {
            'fields': ('id', 'scenario', 'planner', 'run', 'seed', 'deterministic')
        }),
        ('Resultado', {
            'fields': ('satisfied', 'sound', 'best_cost', 'states', 'iterations', 'wall_s')
        }),
        ('Serie', {
            'fields': ('series',),
            'classes': ('collapse',)
        }),
        ('Metadatos', {
            'fields': ('created_at',),
            'classes': ('collapse',)
        })
    )
