# Generated by Django 4.2.7 on 2026-10-19 10:12

from django.db import migrations, models
import uuid


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='BenchmarkRun',
            fields=[
                ('id', models.UUIDField(default=uuid.uuid4, editable=False, primary_key=True, serialize=False)),
                ('scenario', models.CharField(db_index=True, max_length=100, verbose_name='Escenario')),
                ('planner', models.CharField(choices=[('lg', 'LG-SST-STL'), ('baseline', 'SST-STL')], max_length=20, verbose_name='Planificador')),
                ('run', models.PositiveIntegerField(verbose_name='Corrida')),
                ('seed', models.BigIntegerField(verbose_name='Semilla')),
                ('satisfied', models.BooleanField(default=False, verbose_name='Satisfecha')),
                ('sound', models.BooleanField(blank=True, null=True, verbose_name='Verificada')),
                ('best_cost', models.FloatField(blank=True, help_text='Vacío cuando la corrida no tuvo nodos completos', null=True, verbose_name='Mejor Costo')),
                ('states', models.PositiveIntegerField(default=0, verbose_name='Estados')),
                ('iterations', models.PositiveIntegerField(default=0, verbose_name='Iteraciones')),
                ('wall_s', models.FloatField(default=0.0, verbose_name='Tiempo (s)')),
                ('deterministic', models.BooleanField(default=False, verbose_name='Reloj Determinista')),
                ('series', models.JSONField(blank=True, default=list, help_text='Muestras [wall_s, best_cost, states, satisfied]', verbose_name='Serie')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='Fecha de Creación')),
            ],
            options={
                'verbose_name': 'Corrida de Benchmark',
                'verbose_name_plural': 'Corridas de Benchmark',
                'ordering': ['-created_at', 'scenario', 'planner', 'run'],
                'indexes': [models.Index(fields=['scenario', 'planner'], name='bench_bench_scenari_4c1f0e_idx')],
            },
        ),
    ]
